#include "swarm/nn/cells.hpp"

namespace swarm::nn {

MemoryCell::MemoryCell(const std::string& name, int message_dim, int obs_dim, Rng& rng)
    : msg_dim_(message_dim), obs_dim_(obs_dim) {
    const int in = message_dim + obs_dim;
    wz_ = std::make_unique<Param>(name + ".wz", message_dim, in);
    bz_ = std::make_unique<Param>(name + ".bz", message_dim, 1);
    wh_ = std::make_unique<Param>(name + ".wh", message_dim, in);
    bh_ = std::make_unique<Param>(name + ".bh", message_dim, 1);
    orthogonal_init(wz_->w, 1.0, rng);
    orthogonal_init(wh_->w, 1.0, rng);
}

VectorXd MemoryCell::forward(const VectorXd& m_prev, const VectorXd& obs) const {
    Cache c;
    return forward(m_prev, obs, c);
}

VectorXd MemoryCell::forward(const VectorXd& m_prev, const VectorXd& obs, Cache& cache) const {
    SWARM_REQUIRE(m_prev.size() == msg_dim_ && obs.size() == obs_dim_, "MemoryCell shapes");
    VectorXd x(msg_dim_ + obs_dim_);
    x << m_prev, obs;
    VectorXd z = ((wz_->w * x + bz_->w.col(0)).array() * -1.0).exp();
    z = (1.0 + z.array()).inverse();
    VectorXd h = (wh_->w * x + bh_->w.col(0)).array().tanh();
    cache.m_prev = m_prev;
    cache.obs = obs;
    cache.z = z;
    cache.h = h;
    return ((1.0 - z.array()) * m_prev.array() + z.array() * h.array()).matrix();
}

std::pair<VectorXd, VectorXd> MemoryCell::backward(const Cache& c, const VectorXd& dout) {
    VectorXd dz = (dout.array() * (c.h - c.m_prev).array()).matrix();
    VectorXd dh = (dout.array() * c.z.array()).matrix();
    VectorXd dm_direct = (dout.array() * (1.0 - c.z.array())).matrix();

    VectorXd dz_pre = (dz.array() * c.z.array() * (1.0 - c.z.array())).matrix();
    VectorXd dh_pre = (dh.array() * (1.0 - c.h.array().square())).matrix();

    VectorXd x(msg_dim_ + obs_dim_);
    x << c.m_prev, c.obs;
    wz_->g.noalias() += dz_pre * x.transpose();
    bz_->g.col(0) += dz_pre;
    wh_->g.noalias() += dh_pre * x.transpose();
    bh_->g.col(0) += dh_pre;

    VectorXd dx = wz_->w.transpose() * dz_pre + wh_->w.transpose() * dh_pre;
    VectorXd dm = dx.head(msg_dim_) + dm_direct;
    VectorXd dobs = dx.tail(obs_dim_);
    return {dm, dobs};
}

void MemoryCell::collect(ParamList& out) {
    out.push_back(wz_.get());
    out.push_back(bz_.get());
    out.push_back(wh_.get());
    out.push_back(bh_.get());
}

DistanceEncoder::DistanceEncoder(const std::string& name, int dim, Rng& rng) : dim_(dim) {
    freq_ = std::make_unique<Param>(name + ".freq", 1, dim);
    // transformer-style spread of frequencies, then trainable
    for (int k = 0; k < dim; ++k)
        freq_->w(0, k) = std::pow(10000.0, -static_cast<double>(k) / dim) * (1.0 + 0.1 * rng.normal());
}

VectorXd DistanceEncoder::encode(double dist) const {
    double s = std::sqrt(1.0 / dim_);
    VectorXd out(dim_);
    for (int k = 0; k < dim_; ++k) out[k] = s * std::cos(freq_->w(0, k) * dist);
    return out;
}

void DistanceEncoder::backward(double dist, const VectorXd& dout) {
    double s = std::sqrt(1.0 / dim_);
    for (int k = 0; k < dim_; ++k)
        freq_->g(0, k) += dout[k] * (-s * std::sin(freq_->w(0, k) * dist) * dist);
}

}  // namespace swarm::nn
