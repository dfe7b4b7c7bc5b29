#include "swarm/rl/value_norm.hpp"

namespace swarm::rl {

void ValueNormalizer::update(const VectorXd& returns) {
    const double n = static_cast<double>(returns.size());
    if (n == 0) return;
    const double batch_mean = returns.mean();
    const double batch_var = (returns.array() - batch_mean).square().sum() / n;

    if (count_ == 0.0) {
        mean_ = batch_mean;
        var_ = batch_var;
        count_ = n;
        return;
    }
    // Chan et al. parallel-variance merge of (mean_, var_, count_) with the batch.
    const double total = count_ + n;
    const double delta = batch_mean - mean_;
    mean_ += delta * n / total;
    var_ = (var_ * count_ + batch_var * n + delta * delta * count_ * n / total) / total;
    count_ = total;
}

}  // namespace swarm::rl
