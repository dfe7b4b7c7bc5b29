#pragma once

#include <functional>
#include <memory>

#include "swarm/config.hpp"
#include "swarm/nn/core.hpp"
#include "swarm/rewards.hpp"
#include "swarm/rl/value_norm.hpp"
#include "swarm/rng.hpp"

namespace swarm::rl {

using nn::MatrixXd;
using nn::ParamList;
using nn::VectorXd;

// Policy under shared-parameter PPO. `act` must be const and thread-safe
// (rollout workers hold a read-only snapshot); evaluation/backward run on the
// single trainer executor and may keep caches between the two calls.
class PpoPolicy {
 public:
    virtual ~PpoPolicy() = default;
    virtual int input_dim() const = 0;
    virtual int action_cols() const = 0;  // continuous dims, or 1 (index) when discrete
    virtual void act(const VectorXd& input, Rng* sample_rng, VectorXd& action_out,
                     double& logp_out) const = 0;  // null rng = deterministic action
    // Per-sample log-probs and entropies under current parameters.
    virtual VectorXd evaluate_actions(const MatrixXd& inputs, const MatrixXd& actions,
                                      VectorXd& entropy_out) = 0;
    virtual void backward_objective(const VectorXd& dobj_dlogp, const VectorXd& dobj_dentropy) = 0;
    virtual void collect_params(ParamList& out) = 0;
};

// One environment instance per rollout worker. The collector calls
// state()/observe_inputs() once per step, then step() with one action row per
// policy agent; episodes run to the fixed horizon.
class RolloutEnv {
 public:
    virtual ~RolloutEnv() = default;
    virtual void reset(uint64_t episode_seed) = 0;
    virtual int horizon() const = 0;
    virtual int n_policy_agents() const = 0;
    virtual int state_dim() const = 0;
    virtual int input_dim() const = 0;
    virtual VectorXd state() const = 0;
    virtual MatrixXd observe_inputs() = 0;
    virtual double step(const MatrixXd& actions) = 0;
    virtual RewardBreakdown components() const { return {}; }
};

using EnvFactory = std::function<std::unique_ptr<RolloutEnv>(int worker)>;

struct StepRecord {
    VectorXd state;
    MatrixXd inputs;   // n_agents x input_dim
    MatrixXd actions;  // n_agents x action_cols
    VectorXd logp_old;
    double value_old = 0.0;  // denormalized
    double reward = 0.0;
    uint8_t done = 0;
    // fixed horizons truncate rather than terminate: the value of the state
    // reached by the final step bootstraps the recursion past the cut
    double value_bootstrap = 0.0;
    RewardBreakdown comps;
};

struct RolloutBuffer {
    std::vector<StepRecord> steps;
    int agents_per_step = 0;
    long agent_steps() const { return static_cast<long>(steps.size()) * agents_per_step; }
};

// Clipped-surrogate term for one sample; returns min(r*A, clip(r)*A) and its
// exact derivative w.r.t. the ratio (zero in the clipped regions).
double clip_objective_term(double ratio, double advantage, double eps, double* dterm_dratio);

struct LearnCurvePoint {
    int episode = 0;
    double mean_reward = 0.0;
    RewardBreakdown mean_components;
};

struct TrainResult {
    std::vector<LearnCurvePoint> curve;
};

class TrainingDiverged : public std::runtime_error {
 public:
    explicit TrainingDiverged(const std::string& m) : std::runtime_error(m) {}
};

// Global state vectors are metric; the critic sees them scaled into the tanh
// working range.
inline constexpr double kStateScale = 0.1;

// Shared-parameter trainer with a centralized critic over the global state.
// One advantage per time step (from the shared critic) is reused by every
// agent's surrogate.
class PpoTrainer {
 public:
    PpoTrainer(PpoPolicy& policy, int state_dim, const TrainConfig& cfg, uint64_t seed);

    // Runs `episodes` episodes in worker-sized batches; the callback fires per
    // finished episode with its mean per-step reward.
    TrainResult train(const EnvFactory& factory, int episodes,
                      const std::function<void(const LearnCurvePoint&)>& on_episode = {});

    RolloutBuffer collect(const EnvFactory& factory, int n_episodes, int iteration);
    void update(const RolloutBuffer& buffer);

    nn::DenseNet& critic() { return *critic_; }
    ValueNormalizer& normalizer() { return vnorm_; }
    ParamList all_params();
    long skipped_samples() const { return skipped_samples_; }

    // Deterministic value estimate (denormalized).
    double value_of(const VectorXd& state) const;

 private:
    PpoPolicy& policy_;
    TrainConfig cfg_;
    uint64_t seed_;
    std::unique_ptr<nn::DenseNet> critic_;
    ValueNormalizer vnorm_;
    std::unique_ptr<nn::Adam> policy_opt_, critic_opt_;
    long skipped_samples_ = 0;
};

}  // namespace swarm::rl
