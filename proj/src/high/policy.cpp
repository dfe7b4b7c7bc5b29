#include "swarm/high/policy.hpp"

namespace swarm::high {

Vec2 anchor_from_index(int index) {
    SWARM_REQUIRE(index >= 0 && index < kAnchorCount, "anchor index out of range");
    return {kAnchorAxis[index / 3], kAnchorAxis[index % 3]};
}

int index_from_anchor(const Vec2& anchor) {
    for (int a = 0; a < kAnchorCount; ++a) {
        Vec2 c = anchor_from_index(a);
        if (c.x == anchor.x && c.y == anchor.y) return a;
    }
    throw ContractError("anchor not on the candidate grid");
}

HighPolicy::HighPolicy(const std::string& name, int obs_dim, int msg_dim, Rng& rng, int hidden)
    : obs_dim_(obs_dim), msg_dim_(msg_dim) {
    encoder_ = nn::DenseNet(name + ".enc", {obs_dim, hidden, hidden}, nn::Act::kTanh,
                            nn::Act::kTanh, rng);
    selector_ = nn::DenseNet(name + ".sel", {hidden + msg_dim, hidden, kAnchorCount},
                             nn::Act::kTanh, nn::Act::kIdentity, rng, std::sqrt(2.0), 0.01);
}

MatrixXd HighPolicy::logits_batch(const MatrixXd& inputs, nn::DenseNet::Cache* enc_cache,
                                  nn::DenseNet::Cache* sel_cache) const {
    nn::DenseNet::Cache enc_local, sel_local;
    // observations are metric (tens of meters); messages already live in
    // tanh range
    MatrixXd emb = encoder_.forward(kObsScale * inputs.leftCols(obs_dim_),
                                    enc_cache ? *enc_cache : enc_local);
    MatrixXd sel_in(inputs.rows(), emb.cols() + msg_dim_);
    sel_in << emb, inputs.rightCols(msg_dim_);
    return selector_.forward(sel_in, sel_cache ? *sel_cache : sel_local);
}

VectorXd HighPolicy::logits(const VectorXd& obs, const VectorXd& msg) const {
    VectorXd in(obs.size() + msg.size());
    in << obs, msg;
    return logits_batch(in.transpose(), nullptr, nullptr).row(0).transpose();
}

void HighPolicy::act(const VectorXd& input, Rng* sample_rng, VectorXd& action_out,
                     double& logp_out) const {
    VectorXd lg = logits_batch(input.transpose(), nullptr, nullptr).row(0).transpose();
    int idx;
    if (sample_rng) {
        auto out = nn::categorical_sample(lg, *sample_rng);
        idx = out.index;
        logp_out = out.log_prob;
    } else {
        idx = nn::categorical_argmax(lg);
        logp_out = nn::categorical_log_prob(lg, idx);
    }
    action_out = VectorXd::Constant(1, static_cast<double>(idx));
}

VectorXd HighPolicy::evaluate_actions(const MatrixXd& inputs, const MatrixXd& actions,
                                      VectorXd& entropy_out) {
    eval_logits_ = logits_batch(inputs, &enc_cache_, &sel_cache_);
    const long B = inputs.rows();
    eval_indices_.resize(B);
    VectorXd logp(B);
    entropy_out.resize(B);
    for (long i = 0; i < B; ++i) {
        eval_indices_[i] = static_cast<int>(actions(i, 0));
        VectorXd row = eval_logits_.row(i).transpose();
        logp[i] = nn::categorical_log_prob(row, eval_indices_[i]);
        entropy_out[i] = nn::categorical_entropy(row);
    }
    return logp;
}

void HighPolicy::backward_objective(const VectorXd& dobj_dlogp, const VectorXd& dobj_dentropy) {
    const long B = eval_logits_.rows();
    MatrixXd dlogits(B, kAnchorCount);
    for (long i = 0; i < B; ++i) {
        dlogits.row(i) = nn::categorical_backward(eval_logits_.row(i).transpose(),
                                                  eval_indices_[i], dobj_dlogp[i],
                                                  dobj_dentropy[i])
                             .transpose();
    }
    MatrixXd dsel_in = selector_.backward(sel_cache_, dlogits);
    // message side is a constant input: gradients stop here
    encoder_.backward(enc_cache_, dsel_in.leftCols(dsel_in.cols() - msg_dim_));
}

void HighPolicy::collect_params(ParamList& out) {
    encoder_.collect(out);
    selector_.collect(out);
}

Vec2 nav_only_action(const Vec2& anchor, const Vec2& pos, const Vec2& vel, double kp, double kd,
                     double accel_max) {
    Vec2 u = (anchor - pos) * kp - vel * kd;
    return clamp_per_axis(u, accel_max);
}

}  // namespace swarm::high
