#pragma once

#include "swarm/common.hpp"
#include "swarm/nn/heads.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::low {

using nn::MatrixXd;
using nn::ParamList;
using nn::VectorXd;

// Three-part continuous policy: a task trunk over [anchor_rel | o_nei], an
// avoidance trunk over the lidar vector, additive fusion, and an output head
// producing the Gaussian mean (sigma is a learnable state-independent
// vector). Also reused by the adversary, whose "task" block is its pursuit
// observation. Inputs are metric quantities spanning tens of meters; fixed
// scale factors (kTaskScale, kLidarScale) keep the tanh trunks out of
// saturation and live inside the policy so every caller stays consistent.
inline constexpr double kTaskScale = 0.1;
inline constexpr double kLidarScale = 1.0 / 3.0;

class LowPolicy : public rl::PpoPolicy {
 public:
    // input rows: [task_dim | lidar_dim]
    LowPolicy(const std::string& name, int task_dim, int lidar_dim, int hidden, Rng& rng);

    int input_dim() const override { return task_dim_ + lidar_dim_; }
    int action_cols() const override { return 2; }
    int task_dim() const { return task_dim_; }
    int lidar_dim() const { return lidar_dim_; }

    MatrixXd mean_batch(const MatrixXd& inputs) const;
    void act(const VectorXd& input, Rng* sample_rng, VectorXd& action_out,
             double& logp_out) const override;
    VectorXd evaluate_actions(const MatrixXd& inputs, const MatrixXd& actions,
                              VectorXd& entropy_out) override;
    void backward_objective(const VectorXd& dobj_dlogp, const VectorXd& dobj_dentropy) override;
    void collect_params(ParamList& out) override;

    // AT-M recombination: task trunk and head from `task_source`, avoidance
    // trunk from `avoid_source`. Shapes must match.
    void merge_from(const LowPolicy& task_source, const LowPolicy& avoid_source);
    void copy_from(const LowPolicy& other);

    nn::DenseNet& trunk_task() { return trunk_task_; }
    nn::DenseNet& trunk_avoid() { return trunk_avoid_; }
    nn::DenseNet& head() { return head_; }
    nn::GaussianHead& gaussian() { return gauss_; }
    const nn::GaussianHead& gaussian() const { return gauss_; }

 private:
    int task_dim_ = 0, lidar_dim_ = 0;
    nn::DenseNet trunk_task_, trunk_avoid_, head_;
    nn::GaussianHead gauss_;

    // caches between evaluate_actions and backward_objective
    nn::DenseNet::Cache task_cache_, avoid_cache_, head_cache_;
    MatrixXd eval_mu_, eval_actions_;
};

// Input layout helpers for the formation task.
inline int low_input_dim(int neighbor_slots, int lidar_rays) {
    return 2 + 4 * neighbor_slots + lidar_rays;
}

// Conservative lidar view: rays that detected something (reading below the
// cap) are shortened by 0.2 m, floored at 1e-3; cap readings pass through.
std::vector<double> safe_lidar_transform(const std::vector<double>& readings, double cap);

}  // namespace swarm::low
