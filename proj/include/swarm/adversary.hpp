#pragma once

#include <memory>

#include "swarm/grouping.hpp"
#include "swarm/low/policy.hpp"
#include "swarm/rl/ppo.hpp"
#include "swarm/world.hpp"

namespace swarm::adv {

enum class AdversaryKind { kNone, kRuleNearest, kRuleLargest, kPpo };

// Proportional pursuit of the nearest agent; ties go to the lowest index.
// Obstacle repulsion kicks in within 0.5 m of a surface.
Vec2 rule_nearest(const WorldState& world);
// Pursues the centroid of the largest group (ties: first component); with no
// group formed, falls back to the nearest agent.
Vec2 rule_largest(const WorldState& world);

// Pursuit observation: relative position/velocity of every agent, own
// velocity, then the obstacle-only lidar. Fixed width for fixed N.
int adversary_obs_dim(const EnvConfig& cfg);
nn::VectorXd adversary_observation(WorldState& world, const std::vector<double>& lidar);

// The pursuit target the trained adversary is rewarded for approaching:
// centroid of the nearest group with >= 3 members, else the nearest agent.
Vec2 pursuit_target(const WorldState& world);

// Single-agent PPO environment: scripted evaders run proportional navigation
// toward two cluster anchors that re-randomize every 20 steps.
struct AdversaryEnvOptions {
    Config cfg;
    int anchor_hold_steps = 20;
};

class AdversaryEnv : public rl::RolloutEnv {
 public:
    explicit AdversaryEnv(const AdversaryEnvOptions& opt);

    void reset(uint64_t episode_seed) override;
    int horizon() const override { return opt_.cfg.env.episode_steps; }
    int n_policy_agents() const override { return 1; }
    int state_dim() const override { return 4 * opt_.cfg.env.n_agents + 4; }
    int input_dim() const override { return adversary_obs_dim(opt_.cfg.env); }
    nn::VectorXd state() const override;
    nn::MatrixXd observe_inputs() override;
    double step(const nn::MatrixXd& actions) override;

 private:
    void assign_anchors();

    AdversaryEnvOptions opt_;
    WorldState world_;
    std::vector<Vec2> evader_anchors_;
    std::vector<double> scan_;
    Rng script_rng_;
};

struct AdversaryTrainResult {
    std::unique_ptr<low::LowPolicy> policy;
    std::vector<rl::LearnCurvePoint> curve;
};

AdversaryTrainResult train_adversary(const Config& cfg, int episodes, uint64_t seed,
                                     const std::function<void(const rl::LearnCurvePoint&)>&
                                         on_episode = {});

// Builds the same network shape train_adversary produces (for checkpoints).
std::unique_ptr<low::LowPolicy> make_adversary_policy(const EnvConfig& cfg, uint64_t seed);

// One adversary acceleration according to `kind`; `policy` required for kPpo.
Vec2 adversary_action(AdversaryKind kind, WorldState& world, const low::LowPolicy* policy,
                      const std::vector<double>* lidar);

}  // namespace swarm::adv
