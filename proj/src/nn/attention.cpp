#include "swarm/nn/attention.hpp"

namespace swarm::nn {

MultiHeadAttention::MultiHeadAttention(const std::string& name, int in_dim, int model_dim,
                                       int heads, Rng& rng)
    : in_dim_(in_dim), model_dim_(model_dim), heads_(heads), head_dim_(model_dim / heads) {
    SWARM_REQUIRE(model_dim % heads == 0, "model_dim must divide into heads");
    wq_ = std::make_unique<Param>(name + ".wq", model_dim, in_dim);
    bq_ = std::make_unique<Param>(name + ".bq", model_dim, 1);
    wk_ = std::make_unique<Param>(name + ".wk", model_dim, in_dim);
    bk_ = std::make_unique<Param>(name + ".bk", model_dim, 1);
    wv_ = std::make_unique<Param>(name + ".wv", model_dim, in_dim);
    bv_ = std::make_unique<Param>(name + ".bv", model_dim, 1);
    wo_ = std::make_unique<Param>(name + ".wo", model_dim, model_dim);
    bo_ = std::make_unique<Param>(name + ".bo", model_dim, 1);
    orthogonal_init(wq_->w, 1.0, rng);
    orthogonal_init(wk_->w, 1.0, rng);
    orthogonal_init(wv_->w, 1.0, rng);
    orthogonal_init(wo_->w, 1.0, rng);
}

VectorXd MultiHeadAttention::forward(const VectorXd& q_in, const MatrixXd& kv_in) const {
    Cache c;
    return forward(q_in, kv_in, c);
}

VectorXd MultiHeadAttention::forward(const VectorXd& q_in, const MatrixXd& kv_in,
                                     Cache& cache) const {
    SWARM_REQUIRE(kv_in.rows() >= 1, "attention needs at least one key");
    SWARM_REQUIRE(q_in.size() == in_dim_ && kv_in.cols() == in_dim_, "attention input dims");
    const long k = kv_in.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));

    cache.q_in = q_in;
    cache.kv_in = kv_in;
    cache.q = wq_->w * q_in + bq_->w.col(0);
    cache.keys = (kv_in * wk_->w.transpose()).rowwise() + bk_->w.col(0).transpose();
    cache.values = (kv_in * wv_->w.transpose()).rowwise() + bv_->w.col(0).transpose();

    cache.attn.resize(heads_, k);
    cache.concat.resize(model_dim_);
    for (int h = 0; h < heads_; ++h) {
        const int off = h * head_dim_;
        VectorXd scores =
            cache.keys.middleCols(off, head_dim_) * cache.q.segment(off, head_dim_) * scale;
        double mx = scores.maxCoeff();
        VectorXd attn = (scores.array() - mx).exp();
        attn /= attn.sum();
        cache.attn.row(h) = attn.transpose();
        cache.concat.segment(off, head_dim_) =
            cache.values.middleCols(off, head_dim_).transpose() * attn;
    }
    return wo_->w * cache.concat + bo_->w.col(0);
}

std::pair<VectorXd, MatrixXd> MultiHeadAttention::backward(const Cache& c, const VectorXd& dout) {
    const long k = c.kv_in.rows();
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim_));

    wo_->g.noalias() += dout * c.concat.transpose();
    bo_->g.col(0) += dout;
    VectorXd dconcat = wo_->w.transpose() * dout;

    VectorXd dq = VectorXd::Zero(model_dim_);
    MatrixXd dkeys = MatrixXd::Zero(k, model_dim_);
    MatrixXd dvalues = MatrixXd::Zero(k, model_dim_);
    for (int h = 0; h < heads_; ++h) {
        const int off = h * head_dim_;
        VectorXd dout_h = dconcat.segment(off, head_dim_);
        VectorXd attn = c.attn.row(h).transpose();

        VectorXd dattn = c.values.middleCols(off, head_dim_) * dout_h;
        dvalues.middleCols(off, head_dim_).noalias() += attn * dout_h.transpose();

        double inner = attn.dot(dattn);
        VectorXd dscores = (attn.array() * (dattn.array() - inner)).matrix();

        dq.segment(off, head_dim_).noalias() +=
            c.keys.middleCols(off, head_dim_).transpose() * dscores * scale;
        dkeys.middleCols(off, head_dim_).noalias() +=
            dscores * c.q.segment(off, head_dim_).transpose() * scale;
    }

    wq_->g.noalias() += dq * c.q_in.transpose();
    bq_->g.col(0) += dq;
    VectorXd dq_in = wq_->w.transpose() * dq;

    wk_->g.noalias() += dkeys.transpose() * c.kv_in;
    bk_->g.col(0) += dkeys.colwise().sum().transpose();
    wv_->g.noalias() += dvalues.transpose() * c.kv_in;
    bv_->g.col(0) += dvalues.colwise().sum().transpose();

    MatrixXd dkv_in = dkeys * wk_->w + dvalues * wv_->w;
    return {dq_in, dkv_in};
}

void MultiHeadAttention::collect(ParamList& out) {
    for (Param* p : {wq_.get(), bq_.get(), wk_.get(), bk_.get(), wv_.get(), bv_.get(), wo_.get(),
                     bo_.get()})
        out.push_back(p);
}

}  // namespace swarm::nn
