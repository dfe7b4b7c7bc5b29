#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarm/common.hpp"

namespace swarm {

// Environment parameters. Defaults are the reference setup: 8 agents,
// 2 target areas, 3 m sensing range, 16-ray lidar, 0.1 s step.
struct EnvConfig {
    int n_agents = 8;
    int n_targets = 2;
    double obs_range = 3.0;        // sensing / communication radius (m)
    double v_max = 1.0;            // per-axis agent velocity limit (m/s)
    double adv_v_max = 0.75;       // per-axis adversary velocity limit (m/s)
    double accel_max = 1.0;        // per-axis acceleration clamp (m/s^2)
    double dt = 0.1;               // integration step (s)
    int lidar_rays = 16;
    double body_radius = 0.1;      // agent body circle seen by other lidars
    double obstacle_density = 0.0; // obstacles per m^2 (Poisson)
    double obstacle_radius = 0.4;
    double world_half = 10.0;      // world is [-world_half, world_half]^2
    double spawn_half = 2.0;       // agents spawn in [-spawn_half, spawn_half]^2
    double obstacle_clearance = 1.0;  // min surface distance to spawn/target points
    int obstacle_max_retries = 200;
    std::vector<Vec2> target_candidates = {{-8, -8}, {-8, 8}, {8, -8}, {8, 8}};
    bool has_adversary = true;
    double wind_speed = 0.0;       // mean wind speed (m/s); 0 disables
    double wind_drag = 0.1;        // force = drag * speed
    double sensing_std = 0.0;      // lidar noise std (m); 0 disables

    int episode_steps = 400;
    int decision_interval = 10;    // env steps per high-level decision
    double anchor_range = 5.0;     // low-level training anchors in [-r, r]^2

    void validate() const;
};

// Weights of the per-step reward mix. Low-level training uses (f, n, c);
// high-level uses (t, n_high, e).
struct RewardWeights {
    double w_f = 15.0;
    double w_n = 4.0;
    double w_c = 100.0;
    double w_t = 10.0;
    double w_n_high = 0.1;
    double w_e = 100.0;
};

struct RewardConstants {
    double lag = 0.3;          // formation lag coefficient
    double decay = 0.003;      // urgency decay factor
    double alert_evasion = 2.0;
    double alert_collision = 0.5;
    double formation_tol = 1.0;
    double task_radius = 3.0;
    double safety_dist = 0.2;
    double cr1 = 24.0, cr2 = 8.0, c1 = 3.0, c2 = 1.0;
};

struct TrainConfig {
    double gamma = 0.8;
    double clip_eps = 0.2;
    double gae_lambda = 0.95;
    double entropy_coef = 0.01;
    int update_epochs = 15;
    int workers = 4;
    double lr = 1e-4;
    double critic_lr = 1e-3;
    double grad_clip = 10.0;
    int episodes = 500;
    double value_divergence_guard = 1e6;

    // consensus module training cadence
    int consensus_every_episodes = 20;
    int consensus_iters = 500;
    int consensus_batch = 256;
    int consensus_buffer_capacity = 100000;

    // distillation
    int distill_steps = 10000;   // tuples collected per teacher
    int distill_epochs = 2000;
    int distill_batch = 600;
    double distill_lr = 1e-4;
};

struct Config {
    EnvConfig env;
    RewardWeights weights;
    RewardConstants constants;
    TrainConfig train;
    uint64_t seed = 1;
};

// Reads a JSON config file. Missing keys fall back to defaults (each one is
// reported through `defaulted`, when non-null); malformed input raises
// ConfigError naming the offending line.
Config load_config(const std::string& path, std::vector<std::string>* defaulted = nullptr);
Config parse_config_text(const std::string& text, std::vector<std::string>* defaulted = nullptr);
std::string config_to_json(const Config& cfg);

}  // namespace swarm
