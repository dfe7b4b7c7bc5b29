#pragma once

#include <cstdint>
#include <vector>

#include "swarm/common.hpp"
#include "swarm/config.hpp"
#include "swarm/rng.hpp"

namespace swarm {

struct AgentBody {
    Vec2 pos;
    Vec2 vel;
};

struct Obstacle {
    Vec2 center;
    double radius = 0.0;
};

struct Target {
    Vec2 pos;
    double urgency = 1.0;  // in [0, 1], decays as groups occupy the area
};

// Full simulator ground truth. Owned by exactly one executor at a time;
// parallel rollouts use independent instances with independent RNG streams.
struct WorldState {
    int t = 0;
    std::vector<AgentBody> agents;
    AgentBody adversary;
    bool has_adversary = false;
    std::vector<Obstacle> obstacles;
    std::vector<Target> targets;
    Rng rng;
    EnvConfig cfg;

    int n_agents() const { return static_cast<int>(agents.size()); }
};

// Builds a world from config: agents uniform in the spawn square, targets
// drawn without replacement from the candidate set, obstacles Poisson-sampled
// at the configured density with clearance from spawn and target points.
// Identical (config, seed) pairs produce identical worlds.
WorldState init_world(const EnvConfig& cfg, uint64_t seed);

// Semi-implicit Euler update. Accelerations are clamped per axis to
// [-accel_max, accel_max] before use; velocities clamp to the per-axis
// limits (v_max for agents, adv_v_max for the adversary). When wind is
// enabled one shared force is resampled per step and applied to every agent.
void step(WorldState& world, const std::vector<Vec2>& actions, const Vec2& adversary_action);

}  // namespace swarm
