#pragma once

#include "swarm/nn/core.hpp"

namespace swarm::nn {

// Single-update-gate recurrent cell over the agent's own message:
//   x   = [m_prev || obs]
//   z   = sigmoid(Wz x + bz)
//   h   = tanh(Wh x + bh)
//   out = (1 - z) .* m_prev + z .* h
// Output width equals the message width, so the cell can be chained step to
// step.
class MemoryCell {
 public:
    struct Cache {
        VectorXd m_prev, obs, z, h;
    };

    MemoryCell() = default;
    MemoryCell(const std::string& name, int message_dim, int obs_dim, Rng& rng);

    int message_dim() const { return msg_dim_; }
    int obs_dim() const { return obs_dim_; }

    VectorXd forward(const VectorXd& m_prev, const VectorXd& obs) const;
    VectorXd forward(const VectorXd& m_prev, const VectorXd& obs, Cache& cache) const;
    // Returns (d_m_prev, d_obs).
    std::pair<VectorXd, VectorXd> backward(const Cache& cache, const VectorXd& dout);

    void collect(ParamList& out);

 private:
    int msg_dim_ = 0, obs_dim_ = 0;
    std::unique_ptr<Param> wz_, bz_, wh_, bh_;
};

// Learnable frequency bank: phi_k(d) = sqrt(1/D) * cos(w_k * d).
class DistanceEncoder {
 public:
    DistanceEncoder() = default;
    DistanceEncoder(const std::string& name, int dim, Rng& rng);

    int dim() const { return dim_; }
    VectorXd encode(double dist) const;
    // Accumulates frequency gradients for one encoded distance.
    void backward(double dist, const VectorXd& dout);

    void collect(ParamList& out) { out.push_back(freq_.get()); }

 private:
    int dim_ = 0;
    std::unique_ptr<Param> freq_;  // 1 x dim
};

}  // namespace swarm::nn
