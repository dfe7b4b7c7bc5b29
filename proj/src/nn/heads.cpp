#include "swarm/nn/heads.hpp"

namespace swarm::nn {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

inline double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

GaussianHead::GaussianHead(const std::string& name, int dim, double init_sigma) : dim_(dim) {
    raw_sigma_ = std::make_unique<Param>(name + ".raw_sigma", 1, dim);
    // softplus(raw) == init_sigma
    double raw = std::log(std::expm1(init_sigma));
    raw_sigma_->w.setConstant(raw);
}

VectorXd GaussianHead::sigma() const {
    VectorXd s(dim_);
    for (int k = 0; k < dim_; ++k) s[k] = softplus(raw_sigma_->w(0, k));
    return s;
}

VectorXd GaussianHead::sample(const VectorXd& mu, Rng& rng) const {
    VectorXd s = sigma();
    VectorXd out(dim_);
    for (int k = 0; k < dim_; ++k) out[k] = rng.normal(mu[k], s[k]);
    return out;
}

double GaussianHead::log_prob(const VectorXd& mu, const VectorXd& action) const {
    VectorXd s = sigma();
    double lp = 0.0;
    for (int k = 0; k < dim_; ++k) {
        double z = (action[k] - mu[k]) / s[k];
        lp += -0.5 * kLog2Pi - std::log(s[k]) - 0.5 * z * z;
    }
    return lp;
}

VectorXd GaussianHead::log_prob_batch(const MatrixXd& mu, const MatrixXd& actions) const {
    SWARM_REQUIRE(mu.rows() == actions.rows() && mu.cols() == dim_, "gaussian log_prob shape");
    VectorXd s = sigma();
    VectorXd lp = VectorXd::Constant(mu.rows(), -0.5 * kLog2Pi * dim_);
    for (int k = 0; k < dim_; ++k) {
        lp.array() += -std::log(s[k]) -
                      0.5 * ((actions.col(k) - mu.col(k)) / s[k]).array().square();
    }
    return lp;
}

double GaussianHead::entropy() const {
    VectorXd s = sigma();
    double h = 0.0;
    for (int k = 0; k < dim_; ++k) h += 0.5 * (kLog2Pi + 1.0) + std::log(s[k]);
    return h;
}

MatrixXd GaussianHead::backward(const MatrixXd& mu, const MatrixXd& actions,
                                const VectorXd& dobj_dlogp, double dobj_dentropy) {
    VectorXd s = sigma();
    MatrixXd dmu(mu.rows(), dim_);
    for (int k = 0; k < dim_; ++k) {
        double inv_var = 1.0 / (s[k] * s[k]);
        Eigen::ArrayXd diff = (actions.col(k) - mu.col(k)).array();
        // dlogp/dmu = (u - mu)/sigma^2
        dmu.col(k) = (dobj_dlogp.array() * diff * inv_var).matrix();
        // dlogp/dsigma = -1/sigma + (u-mu)^2/sigma^3; dH/dsigma = 1/sigma
        double dsigma = (dobj_dlogp.array() * (diff.square() / (s[k] * s[k] * s[k]) - 1.0 / s[k]))
                            .sum() +
                        dobj_dentropy / s[k];
        raw_sigma_->g(0, k) += dsigma * sigmoid(raw_sigma_->w(0, k));
    }
    return dmu;
}

VectorXd log_softmax(const VectorXd& logits) {
    double mx = logits.maxCoeff();
    double lse = mx + std::log((logits.array() - mx).exp().sum());
    return logits.array() - lse;
}

CategoricalOut categorical_sample(const VectorXd& logits, Rng& rng) {
    VectorXd lp = log_softmax(logits);
    double u = rng.uniform01();
    double cum = 0.0;
    int idx = static_cast<int>(logits.size()) - 1;
    for (int k = 0; k < logits.size(); ++k) {
        cum += std::exp(lp[k]);
        if (u < cum) {
            idx = k;
            break;
        }
    }
    return {idx, lp[idx]};
}

int categorical_argmax(const VectorXd& logits) {
    int best = 0;
    for (int k = 1; k < logits.size(); ++k)
        if (logits[k] > logits[best]) best = k;
    return best;
}

double categorical_log_prob(const VectorXd& logits, int index) {
    return log_softmax(logits)[index];
}

double categorical_entropy(const VectorXd& logits) {
    VectorXd lp = log_softmax(logits);
    return -(lp.array().exp() * lp.array()).sum();
}

VectorXd categorical_backward(const VectorXd& logits, int index, double dobj_dlogp,
                              double dobj_dentropy) {
    VectorXd lp = log_softmax(logits);
    VectorXd p = lp.array().exp();
    VectorXd dlogits = -dobj_dlogp * p;
    dlogits[index] += dobj_dlogp;
    if (dobj_dentropy != 0.0) {
        double h = -(p.array() * lp.array()).sum();
        dlogits.array() += dobj_dentropy * (-p.array() * (lp.array() + h));
    }
    return dlogits;
}

}  // namespace swarm::nn
