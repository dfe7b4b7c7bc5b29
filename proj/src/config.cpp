#include "swarm/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swarm {

using nlohmann::json;

void EnvConfig::validate() const {
    if (n_agents < 1) throw ConfigError("n_agents must be >= 1");
    if (n_targets < 0) throw ConfigError("n_targets must be >= 0");
    if (obs_range <= 0 || v_max <= 0 || adv_v_max <= 0 || accel_max <= 0)
        throw ConfigError("ranges and limits must be positive");
    if (dt <= 0) throw ConfigError("dt must be positive");
    if (lidar_rays < 1) throw ConfigError("lidar_rays must be >= 1");
    if (body_radius <= 0 || obstacle_radius <= 0) throw ConfigError("radii must be positive");
    if (obstacle_density < 0) throw ConfigError("obstacle_density must be >= 0");
    if (world_half <= 0 || spawn_half <= 0) throw ConfigError("world bounds must be positive");
    if (n_targets > static_cast<int>(target_candidates.size()))
        throw ConfigError("n_targets exceeds target candidate set");
    if (episode_steps < 1 || decision_interval < 1)
        throw ConfigError("episode_steps and decision_interval must be >= 1");
}

namespace {

// Fetch cfg[key] if present, else keep default and record the fallback.
template <typename T>
void get_or(const json& j, const char* key, T& out, std::vector<std::string>* defaulted) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    } else if (defaulted) {
        defaulted->push_back(key);
    }
}

int line_of_offset(const std::string& text, size_t byte) {
    int line = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

Config parse_config_text(const std::string& text, std::vector<std::string>* defaulted) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << "config parse error at line " << line_of_offset(text, e.byte) << ": " << e.what();
        throw ConfigError(msg.str());
    }

    Config cfg;
    get_or(j, "seed", cfg.seed, defaulted);

    if (j.contains("env")) {
        const json& e = j.at("env");
        EnvConfig& v = cfg.env;
        get_or(e, "n_agents", v.n_agents, defaulted);
        get_or(e, "n_targets", v.n_targets, defaulted);
        get_or(e, "obs_range", v.obs_range, defaulted);
        get_or(e, "v_max", v.v_max, defaulted);
        get_or(e, "adv_v_max", v.adv_v_max, defaulted);
        get_or(e, "accel_max", v.accel_max, defaulted);
        get_or(e, "dt", v.dt, defaulted);
        get_or(e, "lidar_rays", v.lidar_rays, defaulted);
        get_or(e, "body_radius", v.body_radius, defaulted);
        get_or(e, "obstacle_density", v.obstacle_density, defaulted);
        get_or(e, "obstacle_radius", v.obstacle_radius, defaulted);
        get_or(e, "world_half", v.world_half, defaulted);
        get_or(e, "spawn_half", v.spawn_half, defaulted);
        get_or(e, "obstacle_clearance", v.obstacle_clearance, defaulted);
        get_or(e, "obstacle_max_retries", v.obstacle_max_retries, defaulted);
        get_or(e, "has_adversary", v.has_adversary, defaulted);
        get_or(e, "wind_speed", v.wind_speed, defaulted);
        get_or(e, "wind_drag", v.wind_drag, defaulted);
        get_or(e, "sensing_std", v.sensing_std, defaulted);
        get_or(e, "episode_steps", v.episode_steps, defaulted);
        get_or(e, "decision_interval", v.decision_interval, defaulted);
        get_or(e, "anchor_range", v.anchor_range, defaulted);
        if (e.contains("target_candidates")) {
            v.target_candidates.clear();
            for (const auto& p : e.at("target_candidates"))
                v.target_candidates.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        } else if (defaulted) {
            defaulted->push_back("target_candidates");
        }
    } else if (defaulted) {
        defaulted->push_back("env");
    }

    if (j.contains("weights")) {
        const json& w = j.at("weights");
        get_or(w, "formation", cfg.weights.w_f, defaulted);
        get_or(w, "navigation", cfg.weights.w_n, defaulted);
        get_or(w, "collision", cfg.weights.w_c, defaulted);
        get_or(w, "task", cfg.weights.w_t, defaulted);
        get_or(w, "navigation_high", cfg.weights.w_n_high, defaulted);
        get_or(w, "evasion", cfg.weights.w_e, defaulted);
    }

    if (j.contains("reward_constants")) {
        const json& r = j.at("reward_constants");
        get_or(r, "lag", cfg.constants.lag, defaulted);
        get_or(r, "decay", cfg.constants.decay, defaulted);
        get_or(r, "alert_evasion", cfg.constants.alert_evasion, defaulted);
        get_or(r, "alert_collision", cfg.constants.alert_collision, defaulted);
        get_or(r, "formation_tol", cfg.constants.formation_tol, defaulted);
        get_or(r, "task_radius", cfg.constants.task_radius, defaulted);
        get_or(r, "safety_dist", cfg.constants.safety_dist, defaulted);
    }

    if (j.contains("train")) {
        const json& t = j.at("train");
        TrainConfig& v = cfg.train;
        get_or(t, "gamma", v.gamma, defaulted);
        get_or(t, "clip_eps", v.clip_eps, defaulted);
        get_or(t, "gae_lambda", v.gae_lambda, defaulted);
        get_or(t, "entropy_coef", v.entropy_coef, defaulted);
        get_or(t, "update_epochs", v.update_epochs, defaulted);
        get_or(t, "workers", v.workers, defaulted);
        get_or(t, "lr", v.lr, defaulted);
        get_or(t, "critic_lr", v.critic_lr, defaulted);
        get_or(t, "grad_clip", v.grad_clip, defaulted);
        get_or(t, "episodes", v.episodes, defaulted);
        get_or(t, "consensus_every_episodes", v.consensus_every_episodes, defaulted);
        get_or(t, "consensus_iters", v.consensus_iters, defaulted);
        get_or(t, "consensus_batch", v.consensus_batch, defaulted);
        get_or(t, "consensus_buffer_capacity", v.consensus_buffer_capacity, defaulted);
        get_or(t, "distill_steps", v.distill_steps, defaulted);
        get_or(t, "distill_epochs", v.distill_epochs, defaulted);
        get_or(t, "distill_batch", v.distill_batch, defaulted);
        get_or(t, "distill_lr", v.distill_lr, defaulted);
    }

    cfg.env.validate();
    return cfg;
}

Config load_config(const std::string& path, std::vector<std::string>* defaulted) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), defaulted);
}

std::string config_to_json(const Config& cfg) {
    json e;
    e["n_agents"] = cfg.env.n_agents;
    e["n_targets"] = cfg.env.n_targets;
    e["obs_range"] = cfg.env.obs_range;
    e["v_max"] = cfg.env.v_max;
    e["adv_v_max"] = cfg.env.adv_v_max;
    e["accel_max"] = cfg.env.accel_max;
    e["dt"] = cfg.env.dt;
    e["lidar_rays"] = cfg.env.lidar_rays;
    e["body_radius"] = cfg.env.body_radius;
    e["obstacle_density"] = cfg.env.obstacle_density;
    e["obstacle_radius"] = cfg.env.obstacle_radius;
    e["world_half"] = cfg.env.world_half;
    e["spawn_half"] = cfg.env.spawn_half;
    e["obstacle_clearance"] = cfg.env.obstacle_clearance;
    e["obstacle_max_retries"] = cfg.env.obstacle_max_retries;
    e["has_adversary"] = cfg.env.has_adversary;
    e["wind_speed"] = cfg.env.wind_speed;
    e["wind_drag"] = cfg.env.wind_drag;
    e["sensing_std"] = cfg.env.sensing_std;
    e["episode_steps"] = cfg.env.episode_steps;
    e["decision_interval"] = cfg.env.decision_interval;
    e["anchor_range"] = cfg.env.anchor_range;
    json cands = json::array();
    for (const auto& p : cfg.env.target_candidates) cands.push_back({p.x, p.y});
    e["target_candidates"] = cands;

    json w;
    w["formation"] = cfg.weights.w_f;
    w["navigation"] = cfg.weights.w_n;
    w["collision"] = cfg.weights.w_c;
    w["task"] = cfg.weights.w_t;
    w["navigation_high"] = cfg.weights.w_n_high;
    w["evasion"] = cfg.weights.w_e;

    json r;
    r["lag"] = cfg.constants.lag;
    r["decay"] = cfg.constants.decay;
    r["alert_evasion"] = cfg.constants.alert_evasion;
    r["alert_collision"] = cfg.constants.alert_collision;
    r["formation_tol"] = cfg.constants.formation_tol;
    r["task_radius"] = cfg.constants.task_radius;
    r["safety_dist"] = cfg.constants.safety_dist;

    json t;
    t["gamma"] = cfg.train.gamma;
    t["clip_eps"] = cfg.train.clip_eps;
    t["gae_lambda"] = cfg.train.gae_lambda;
    t["entropy_coef"] = cfg.train.entropy_coef;
    t["update_epochs"] = cfg.train.update_epochs;
    t["workers"] = cfg.train.workers;
    t["lr"] = cfg.train.lr;
    t["critic_lr"] = cfg.train.critic_lr;
    t["grad_clip"] = cfg.train.grad_clip;
    t["episodes"] = cfg.train.episodes;
    t["consensus_every_episodes"] = cfg.train.consensus_every_episodes;
    t["consensus_iters"] = cfg.train.consensus_iters;
    t["consensus_batch"] = cfg.train.consensus_batch;
    t["consensus_buffer_capacity"] = cfg.train.consensus_buffer_capacity;
    t["distill_steps"] = cfg.train.distill_steps;
    t["distill_epochs"] = cfg.train.distill_epochs;
    t["distill_batch"] = cfg.train.distill_batch;
    t["distill_lr"] = cfg.train.distill_lr;

    json j;
    j["seed"] = cfg.seed;
    j["env"] = e;
    j["weights"] = w;
    j["reward_constants"] = r;
    j["train"] = t;
    return j.dump(2);
}

}  // namespace swarm
