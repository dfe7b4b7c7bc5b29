#include "swarm/adversary.hpp"

#include "swarm/high/policy.hpp"
#include "swarm/lidar.hpp"
#include "swarm/rewards.hpp"

namespace swarm::adv {

namespace {

Vec2 obstacle_repulsion(const WorldState& w, const Vec2& pos) {
    Vec2 push{0, 0};
    for (const auto& o : w.obstacles) {
        double surface = distance(pos, o.center) - o.radius;
        if (surface < 0.5) {
            Vec2 away = pos - o.center;
            double n = away.norm();
            if (n > 1e-9) push += away * (2.0 * (0.5 - std::max(surface, 0.0)) / 0.5 / n);
        }
    }
    return push;
}

Vec2 pursue(const WorldState& w, const Vec2& target) {
    Vec2 u = (target - w.adversary.pos) * 1.0 - w.adversary.vel * 0.5;
    u += obstacle_repulsion(w, w.adversary.pos);
    return clamp_per_axis(u, w.cfg.accel_max);
}

int nearest_agent(const WorldState& w) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < w.n_agents(); ++i) {
        double d = distance(w.agents[i].pos, w.adversary.pos);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

Vec2 centroid_of(const WorldState& w, const std::vector<int>& members) {
    Vec2 c{0, 0};
    for (int m : members) c += w.agents[m].pos;
    return c / static_cast<double>(members.size());
}

}  // namespace

Vec2 rule_nearest(const WorldState& w) {
    return pursue(w, w.agents[nearest_agent(w)].pos);
}

Vec2 rule_largest(const WorldState& w) {
    Grouping g = partition_groups(w);
    if (g.components.empty()) return pursue(w, w.agents[nearest_agent(w)].pos);
    size_t best = 0;
    for (size_t k = 1; k < g.components.size(); ++k)
        if (g.components[k].size() > g.components[best].size()) best = k;
    return pursue(w, centroid_of(w, g.components[best]));
}

Vec2 pursuit_target(const WorldState& w) {
    Grouping g = partition_groups(w);
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < g.components.size(); ++k) {
        double d = distance(centroid_of(w, g.components[k]), w.adversary.pos);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(k);
        }
    }
    if (best >= 0) return centroid_of(w, g.components[best]);
    return w.agents[nearest_agent(w)].pos;
}

int adversary_obs_dim(const EnvConfig& cfg) { return 4 * cfg.n_agents + 2 + cfg.lidar_rays; }

nn::VectorXd adversary_observation(WorldState& w, const std::vector<double>& lidar) {
    nn::VectorXd o(adversary_obs_dim(w.cfg));
    int k = 0;
    for (const auto& a : w.agents) {
        o[k++] = a.pos.x - w.adversary.pos.x;
        o[k++] = a.pos.y - w.adversary.pos.y;
        o[k++] = a.vel.x - w.adversary.vel.x;
        o[k++] = a.vel.y - w.adversary.vel.y;
    }
    o[k++] = w.adversary.vel.x;
    o[k++] = w.adversary.vel.y;
    for (double d : lidar) o[k++] = d;
    return o;
}

AdversaryEnv::AdversaryEnv(const AdversaryEnvOptions& opt) : opt_(opt) {
    opt_.cfg.env.n_targets = 0;
    opt_.cfg.env.has_adversary = true;
    reset(1);
}

void AdversaryEnv::assign_anchors() {
    double r = opt_.cfg.env.anchor_range;
    Vec2 a{script_rng_.uniform(-r, r), script_rng_.uniform(-r, r)};
    Vec2 b{script_rng_.uniform(-r, r), script_rng_.uniform(-r, r)};
    evader_anchors_.resize(world_.n_agents());
    for (int i = 0; i < world_.n_agents(); ++i)
        evader_anchors_[i] = (script_rng_.uniform01() < 0.5) ? a : b;
}

void AdversaryEnv::reset(uint64_t episode_seed) {
    world_ = init_world(opt_.cfg.env, episode_seed);
    script_rng_.seed(Rng::derive(episode_seed, 0xADE));
    assign_anchors();
    scan_ = adversary_lidar(world_);
}

nn::VectorXd AdversaryEnv::state() const {
    nn::VectorXd s(state_dim());
    int k = 0;
    for (const auto& a : world_.agents) {
        s[k++] = a.pos.x;
        s[k++] = a.pos.y;
        s[k++] = a.vel.x;
        s[k++] = a.vel.y;
    }
    s[k++] = world_.adversary.pos.x;
    s[k++] = world_.adversary.pos.y;
    s[k++] = world_.adversary.vel.x;
    s[k++] = world_.adversary.vel.y;
    return s;
}

nn::MatrixXd AdversaryEnv::observe_inputs() {
    return adversary_observation(world_, scan_).transpose();
}

double AdversaryEnv::step(const nn::MatrixXd& actions) {
    if (world_.t % opt_.anchor_hold_steps == 0 && world_.t > 0) assign_anchors();
    std::vector<Vec2> u(world_.n_agents());
    for (int i = 0; i < world_.n_agents(); ++i)
        u[i] = high::nav_only_action(evader_anchors_[i], world_.agents[i].pos,
                                     world_.agents[i].vel);
    swarm::step(world_, u, {actions(0, 0), actions(0, 1)});
    scan_ = adversary_lidar(world_);

    double d_min = *std::min_element(scan_.begin(), scan_.end());
    double pursuit = distance(world_.adversary.pos, pursuit_target(world_));
    return -pursuit - collision_penalty_from_min(d_min, opt_.cfg.constants);
}

AdversaryTrainResult train_adversary(
    const Config& cfg, int episodes, uint64_t seed,
    const std::function<void(const rl::LearnCurvePoint&)>& on_episode) {
    AdversaryTrainResult out;
    out.policy = make_adversary_policy(cfg.env, seed);
    AdversaryEnvOptions opt;
    opt.cfg = cfg;
    AdversaryEnv probe(opt);
    rl::PpoTrainer trainer(*out.policy, probe.state_dim(), cfg.train, Rng::derive(seed, 0xAD));
    out.curve = trainer
                    .train([&](int) { return std::make_unique<AdversaryEnv>(opt); }, episodes,
                           on_episode)
                    .curve;
    return out;
}

std::unique_ptr<low::LowPolicy> make_adversary_policy(const EnvConfig& cfg, uint64_t seed) {
    Rng rng(Rng::derive(seed, 0xAD2));
    return std::make_unique<low::LowPolicy>("adversary", 4 * cfg.n_agents + 2, cfg.lidar_rays,
                                            128, rng);
}

Vec2 adversary_action(AdversaryKind kind, WorldState& world, const low::LowPolicy* policy,
                      const std::vector<double>* lidar) {
    switch (kind) {
        case AdversaryKind::kNone:
            return {0, 0};
        case AdversaryKind::kRuleNearest:
            return rule_nearest(world);
        case AdversaryKind::kRuleLargest:
            return rule_largest(world);
        case AdversaryKind::kPpo: {
            SWARM_REQUIRE(policy != nullptr, "ppo adversary needs a policy");
            std::vector<double> local;
            if (!lidar) {
                local = adversary_lidar(world);
                lidar = &local;
            }
            nn::VectorXd obs = adversary_observation(world, *lidar);
            nn::MatrixXd mu = policy->mean_batch(obs.transpose());
            return clamp_per_axis({mu(0, 0), mu(0, 1)}, world.cfg.accel_max);
        }
    }
    return {0, 0};
}

}  // namespace swarm::adv
