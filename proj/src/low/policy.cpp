#include "swarm/low/policy.hpp"

namespace swarm::low {

LowPolicy::LowPolicy(const std::string& name, int task_dim, int lidar_dim, int hidden, Rng& rng)
    : task_dim_(task_dim), lidar_dim_(lidar_dim) {
    trunk_task_ = nn::DenseNet(name + ".task", {task_dim, hidden, hidden, hidden}, nn::Act::kTanh,
                               nn::Act::kTanh, rng);
    trunk_avoid_ = nn::DenseNet(name + ".avoid", {lidar_dim, hidden, hidden, hidden},
                                nn::Act::kTanh, nn::Act::kTanh, rng);
    head_ = nn::DenseNet(name + ".head", {hidden, hidden, hidden, 2}, nn::Act::kTanh,
                         nn::Act::kIdentity, rng, std::sqrt(2.0), 0.01);
    gauss_ = nn::GaussianHead(name + ".out", 2, 0.5);
}

MatrixXd LowPolicy::mean_batch(const MatrixXd& inputs) const {
    SWARM_REQUIRE(inputs.cols() == input_dim(), "LowPolicy: input width mismatch");
    MatrixXd fused = trunk_task_.forward(kTaskScale * inputs.leftCols(task_dim_)) +
                     trunk_avoid_.forward(kLidarScale * inputs.rightCols(lidar_dim_));
    return head_.forward(fused);
}

void LowPolicy::act(const VectorXd& input, Rng* sample_rng, VectorXd& action_out,
                    double& logp_out) const {
    MatrixXd mu = mean_batch(input.transpose());
    VectorXd m = mu.row(0).transpose();
    if (sample_rng) {
        action_out = gauss_.sample(m, *sample_rng);
    } else {
        action_out = m;
    }
    logp_out = gauss_.log_prob(m, action_out);
}

VectorXd LowPolicy::evaluate_actions(const MatrixXd& inputs, const MatrixXd& actions,
                                     VectorXd& entropy_out) {
    MatrixXd fused =
        trunk_task_.forward(kTaskScale * inputs.leftCols(task_dim_), task_cache_) +
        trunk_avoid_.forward(kLidarScale * inputs.rightCols(lidar_dim_), avoid_cache_);
    eval_mu_ = head_.forward(fused, head_cache_);
    eval_actions_ = actions;
    entropy_out = VectorXd::Constant(inputs.rows(), gauss_.entropy());
    return gauss_.log_prob_batch(eval_mu_, actions);
}

void LowPolicy::backward_objective(const VectorXd& dobj_dlogp, const VectorXd& dobj_dentropy) {
    MatrixXd dmu = gauss_.backward(eval_mu_, eval_actions_, dobj_dlogp, dobj_dentropy.sum());
    MatrixXd dfused = head_.backward(head_cache_, dmu);
    trunk_task_.backward(task_cache_, dfused);
    trunk_avoid_.backward(avoid_cache_, dfused);
}

void LowPolicy::collect_params(ParamList& out) {
    trunk_task_.collect(out);
    trunk_avoid_.collect(out);
    head_.collect(out);
    gauss_.collect(out);
}

namespace {
void copy_params(nn::DenseNet& dst, const nn::DenseNet& src) {
    ParamList d, s;
    dst.collect(d);
    const_cast<nn::DenseNet&>(src).collect(s);
    SWARM_REQUIRE(d.size() == s.size(), "merge: layer count mismatch");
    for (size_t i = 0; i < d.size(); ++i) {
        SWARM_REQUIRE(d[i]->w.rows() == s[i]->w.rows() && d[i]->w.cols() == s[i]->w.cols(),
                      "merge: shape mismatch");
        d[i]->w = s[i]->w;
    }
}
}  // namespace

void LowPolicy::merge_from(const LowPolicy& task_source, const LowPolicy& avoid_source) {
    copy_params(trunk_task_, task_source.trunk_task_);
    copy_params(head_, task_source.head_);
    copy_params(trunk_avoid_, avoid_source.trunk_avoid_);
    ParamList d, s;
    gauss_.collect(d);
    const_cast<LowPolicy&>(task_source).gauss_.collect(s);
    d[0]->w = s[0]->w;
}

void LowPolicy::copy_from(const LowPolicy& other) { merge_from(other, other); }

std::vector<double> safe_lidar_transform(const std::vector<double>& readings, double cap) {
    std::vector<double> out = readings;
    for (double& d : out)
        if (d < cap) d = std::max(d - 0.2, 1e-3);
    return out;
}

}  // namespace swarm::low
