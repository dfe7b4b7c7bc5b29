#pragma once

#include "swarm/nn/core.hpp"

namespace swarm::nn {

// Scaled-dot-product multi-head attention for a single query against k
// key/value rows, with input projections and an output projection. The
// caller guarantees k >= 1.
class MultiHeadAttention {
 public:
    struct Cache {
        VectorXd q_in;
        MatrixXd kv_in;              // k x in_dim (keys and values share inputs here)
        VectorXd q;                  // model_dim
        MatrixXd keys, values;       // k x model_dim
        MatrixXd attn;               // heads x k
        VectorXd concat;             // model_dim
    };

    MultiHeadAttention() = default;
    MultiHeadAttention(const std::string& name, int in_dim, int model_dim, int heads, Rng& rng);

    int model_dim() const { return model_dim_; }

    // kv_in rows are the attended items; keys and values are projected from
    // the same rows.
    VectorXd forward(const VectorXd& q_in, const MatrixXd& kv_in) const;
    VectorXd forward(const VectorXd& q_in, const MatrixXd& kv_in, Cache& cache) const;
    // Returns (d_q_in, d_kv_in).
    std::pair<VectorXd, MatrixXd> backward(const Cache& cache, const VectorXd& dout);

    // Per-head attention weights of the last forward (for tests/analysis).
    static const MatrixXd& weights(const Cache& cache) { return cache.attn; }

    void collect(ParamList& out);

 private:
    int in_dim_ = 0, model_dim_ = 0, heads_ = 0, head_dim_ = 0;
    std::unique_ptr<Param> wq_, bq_, wk_, bk_, wv_, bv_, wo_, bo_;
};

}  // namespace swarm::nn
