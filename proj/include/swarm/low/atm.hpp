#pragma once

#include <memory>

#include "swarm/low/envs.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::low {

// Three-stage alternating schedule for one pattern:
//   step 1: obstacle-free training from scratch,
//   step 2: obstacle training from scratch,
//   step 3: recombine [task_1, avoid_2, head_1] and fine-tune with obstacles
//           (critic and value normalization carried over from step 2).
// skip_recombine instead fine-tunes the step-2 policy directly, the variant
// preferred for small patterns.
struct AtmOptions {
    Config cfg;  // cfg.env.n_agents is the pattern size
    int episodes1 = 500;
    int episodes2 = 500;
    int episodes3 = 500;
    double obstacle_density = 0.03;
    bool skip_recombine = false;
    int hidden = 128;
};

struct AtmResult {
    std::unique_ptr<LowPolicy> policy_step1;
    std::unique_ptr<LowPolicy> policy_step2;
    std::unique_ptr<LowPolicy> policy_final;
    std::vector<rl::LearnCurvePoint> curve1, curve2, curve3;
};

AtmResult atm_train(const AtmOptions& opt, uint64_t seed,
                    const std::function<void(const std::string&, const rl::LearnCurvePoint&)>&
                        on_episode = {});

}  // namespace swarm::low
