#pragma once

#include "swarm/nn/core.hpp"

namespace swarm::rl {

using nn::VectorXd;

// Running first/second moments of returns; the critic regresses normalized
// targets and its outputs are denormalized on the way back out.
class ValueNormalizer {
 public:
    void update(const VectorXd& returns);

    double normalize(double x) const { return (x - mean_) / std_(); }
    double denormalize(double x) const { return x * std_() + mean_; }
    VectorXd normalize(const VectorXd& x) const { return (x.array() - mean_) / std_(); }
    VectorXd denormalize(const VectorXd& x) const { return x.array() * std_() + mean_; }

    double mean() const { return mean_; }
    double variance() const { return var_; }
    bool initialized() const { return count_ > 0.0; }

 private:
    double std_() const { return std::sqrt(var_ + 1e-8); }
    double mean_ = 0.0;
    double var_ = 1.0;
    double count_ = 0.0;
};

}  // namespace swarm::rl
