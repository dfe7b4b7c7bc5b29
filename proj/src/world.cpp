#include "swarm/world.hpp"

#include <algorithm>

namespace swarm {

WorldState init_world(const EnvConfig& cfg, uint64_t seed) {
    cfg.validate();
    WorldState w;
    w.cfg = cfg;
    w.rng.seed(Rng::derive(seed, 0xE17Dull));
    w.t = 0;

    w.agents.resize(cfg.n_agents);
    for (auto& a : w.agents) {
        a.pos = {w.rng.uniform(-cfg.spawn_half, cfg.spawn_half),
                 w.rng.uniform(-cfg.spawn_half, cfg.spawn_half)};
        a.vel = {0.0, 0.0};
    }

    // Targets: distinct picks from the candidate set, urgency 1.
    std::vector<int> cand(cfg.target_candidates.size());
    for (size_t i = 0; i < cand.size(); ++i) cand[i] = static_cast<int>(i);
    for (int k = 0; k < cfg.n_targets; ++k) {
        uint64_t pick = w.rng.uniform_index(cand.size() - k);
        std::swap(cand[k], cand[k + pick]);
        w.targets.push_back({cfg.target_candidates[cand[k]], 1.0});
    }

    w.has_adversary = cfg.has_adversary;
    if (cfg.has_adversary) {
        // Fair start: anywhere in the interior, but not already inside the
        // evasion alert radius of a spawned agent.
        double half = std::max(cfg.world_half - 2.0, cfg.spawn_half);
        for (int attempt = 0;; ++attempt) {
            Vec2 p{w.rng.uniform(-half, half), w.rng.uniform(-half, half)};
            bool clear = true;
            for (const auto& a : w.agents)
                if (distance(p, a.pos) < 2.0) clear = false;
            if (clear || attempt > cfg.obstacle_max_retries) {
                w.adversary.pos = p;
                w.adversary.vel = {0.0, 0.0};
                break;
            }
        }
    }

    double area = (2.0 * cfg.world_half) * (2.0 * cfg.world_half);
    uint64_t count = w.rng.poisson(cfg.obstacle_density * area);
    for (uint64_t k = 0; k < count; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < cfg.obstacle_max_retries; ++attempt) {
            Vec2 c{w.rng.uniform(-cfg.world_half, cfg.world_half),
                   w.rng.uniform(-cfg.world_half, cfg.world_half)};
            bool ok = true;
            for (const auto& a : w.agents)
                if (distance(c, a.pos) - cfg.obstacle_radius < cfg.obstacle_clearance) ok = false;
            for (const auto& t : w.targets)
                if (distance(c, t.pos) - cfg.obstacle_radius < cfg.obstacle_clearance) ok = false;
            if (w.has_adversary &&
                distance(c, w.adversary.pos) - cfg.obstacle_radius < cfg.obstacle_clearance)
                ok = false;
            if (ok) {
                w.obstacles.push_back({c, cfg.obstacle_radius});
                placed = true;
                break;
            }
        }
        if (!placed)
            throw ConfigError("infeasible obstacle placement: no clear spot after retries");
    }
    return w;
}

void step(WorldState& w, const std::vector<Vec2>& actions, const Vec2& adversary_action) {
    SWARM_REQUIRE(static_cast<int>(actions.size()) == w.n_agents(),
                  "step: one action per agent required");
    const EnvConfig& cfg = w.cfg;

    Vec2 wind{0.0, 0.0};
    if (cfg.wind_speed > 0.0) {
        // One shared gust per step: Gaussian magnitude around drag*speed,
        // uniform heading.
        double mag = std::max(0.0, w.rng.normal(cfg.wind_speed * cfg.wind_drag,
                                                cfg.wind_speed * cfg.wind_drag * 0.25));
        double ang = w.rng.uniform(0.0, 6.283185307179586476925286766559);
        wind = {mag * std::cos(ang), mag * std::sin(ang)};
    }

    for (int i = 0; i < w.n_agents(); ++i) {
        Vec2 u = clamp_per_axis(actions[i], cfg.accel_max);
        AgentBody& a = w.agents[i];
        a.vel = clamp_per_axis(a.vel + (u + wind) * cfg.dt, cfg.v_max);
        a.pos += a.vel * cfg.dt;
    }
    if (w.has_adversary) {
        Vec2 u = clamp_per_axis(adversary_action, cfg.accel_max);
        w.adversary.vel = clamp_per_axis(w.adversary.vel + u * cfg.dt, cfg.adv_v_max);
        w.adversary.pos += w.adversary.vel * cfg.dt;
    }
    ++w.t;
}

}  // namespace swarm
