#pragma once

#include "swarm/nn/core.hpp"

namespace swarm::nn {

// Diagonal Gaussian over actions. The mean comes from a network; the standard
// deviation is a state-independent learnable vector mapped through softplus.
class GaussianHead {
 public:
    GaussianHead() = default;
    GaussianHead(const std::string& name, int dim, double init_sigma = 0.5);

    int dim() const { return dim_; }
    VectorXd sigma() const;

    VectorXd sample(const VectorXd& mu, Rng& rng) const;
    double log_prob(const VectorXd& mu, const VectorXd& action) const;
    // Row-wise over batches; returns per-sample log-probs.
    VectorXd log_prob_batch(const MatrixXd& mu, const MatrixXd& actions) const;
    double entropy() const;  // state-independent

    // d(objective)/d(mu) for given per-sample d(objective)/d(logp); also
    // accumulates the raw-sigma gradient, including `dobj_dentropy` from an
    // entropy bonus term.
    MatrixXd backward(const MatrixXd& mu, const MatrixXd& actions, const VectorXd& dobj_dlogp,
                      double dobj_dentropy);

    void collect(ParamList& out) { out.push_back(raw_sigma_.get()); }

 private:
    int dim_ = 0;
    std::unique_ptr<Param> raw_sigma_;  // 1 x dim
};

// Categorical over logits; sampling, exact log-mass and entropy.
struct CategoricalOut {
    int index = 0;
    double log_prob = 0.0;
};

CategoricalOut categorical_sample(const VectorXd& logits, Rng& rng);
int categorical_argmax(const VectorXd& logits);
VectorXd log_softmax(const VectorXd& logits);
double categorical_log_prob(const VectorXd& logits, int index);
double categorical_entropy(const VectorXd& logits);
// dlogits for objective = dobj_dlogp * logp(chosen) + dobj_dentropy * H.
VectorXd categorical_backward(const VectorXd& logits, int index, double dobj_dlogp,
                              double dobj_dentropy);

}  // namespace swarm::nn
