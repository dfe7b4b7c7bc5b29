#pragma once

#include <optional>

#include "swarm/lidar.hpp"
#include "swarm/low/policy.hpp"
#include "swarm/observation.hpp"
#include "swarm/rewards.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::low {

// Formation-and-navigation task for one pattern: all agents share a random
// anchor per episode, rewards are the low-level mix (formation, anchor
// navigation, collision). No targets, no adversary. With n_agents = 1 and a
// fixed anchor this doubles as the point-mass navigation smoke task.
struct LowEnvOptions {
    Config cfg;                       // cfg.env.n_agents is the pattern size
    double obstacle_density = 0.0;    // overrides cfg.env.obstacle_density
    std::optional<Vec2> fixed_anchor; // unset: uniform in [-anchor_range, anchor_range]^2
};

class FormationEnv : public rl::RolloutEnv {
 public:
    explicit FormationEnv(const LowEnvOptions& opt);

    void reset(uint64_t episode_seed) override;
    int horizon() const override { return opt_.cfg.env.episode_steps; }
    int n_policy_agents() const override { return opt_.cfg.env.n_agents; }
    int state_dim() const override { return 4 * opt_.cfg.env.n_agents + 2; }
    int input_dim() const override {
        return low_input_dim(opt_.cfg.env.n_agents - 1, opt_.cfg.env.lidar_rays);
    }
    nn::VectorXd state() const override;
    nn::MatrixXd observe_inputs() override;
    double step(const nn::MatrixXd& actions) override;
    RewardBreakdown components() const override { return last_; }

    const WorldState& world() const { return world_; }
    const Vec2& anchor() const { return anchor_; }

 private:
    void rescan();

    LowEnvOptions opt_;
    WorldState world_;
    Vec2 anchor_;
    double prev_formation_ = 0.0;
    std::vector<std::vector<double>> scans_;
    RewardBreakdown last_;
};

}  // namespace swarm::low
