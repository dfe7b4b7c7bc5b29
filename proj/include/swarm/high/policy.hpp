#pragma once

#include "swarm/common.hpp"
#include "swarm/nn/heads.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::high {

using nn::MatrixXd;
using nn::ParamList;
using nn::VectorXd;

// 3x3 grid of candidate anchors, row-major over axis {-8, 0, 8}:
// index a -> (axis[a / 3], axis[a % 3]).
inline constexpr int kAnchorCount = 9;
inline constexpr double kAnchorAxis[3] = {-8.0, 0.0, 8.0};
inline constexpr double kObsScale = 0.1;  // metric observations into tanh range

Vec2 anchor_from_index(int index);
int index_from_anchor(const Vec2& anchor);

// Discrete anchor selector: an observation encoder feeds a selector head
// together with the consensus message. RL gradients stop at the message
// input; the consensus parameters are never touched from here.
class HighPolicy : public rl::PpoPolicy {
 public:
    HighPolicy() = default;
    HighPolicy(const std::string& name, int obs_dim, int msg_dim, Rng& rng, int hidden = 128);

    int obs_dim() const { return obs_dim_; }
    int msg_dim() const { return msg_dim_; }
    int input_dim() const override { return obs_dim_ + msg_dim_; }
    int action_cols() const override { return 1; }

    VectorXd logits(const VectorXd& obs, const VectorXd& msg) const;
    void act(const VectorXd& input, Rng* sample_rng, VectorXd& action_out,
             double& logp_out) const override;
    VectorXd evaluate_actions(const MatrixXd& inputs, const MatrixXd& actions,
                              VectorXd& entropy_out) override;
    void backward_objective(const VectorXd& dobj_dlogp, const VectorXd& dobj_dentropy) override;
    void collect_params(ParamList& out) override;

 private:
    MatrixXd logits_batch(const MatrixXd& inputs, nn::DenseNet::Cache* enc_cache,
                          nn::DenseNet::Cache* sel_cache) const;

    int obs_dim_ = 0, msg_dim_ = 0;
    nn::DenseNet encoder_;   // obs -> embedding
    nn::DenseNet selector_;  // [embedding || msg] -> 9 logits

    nn::DenseNet::Cache enc_cache_, sel_cache_;
    MatrixXd eval_logits_;
    std::vector<int> eval_indices_;
};

// Proportional navigation fallback used while pre-training the selector:
// u = clamp(kp * (anchor - p) - kd * v).
Vec2 nav_only_action(const Vec2& anchor, const Vec2& pos, const Vec2& vel, double kp = 1.0,
                     double kd = 0.5, double accel_max = 1.0);

}  // namespace swarm::high
