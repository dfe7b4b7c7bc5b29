#pragma once

#include <cstdint>
#include <vector>

#include "swarm/nn/core.hpp"

namespace swarm::rl {

using nn::VectorXd;

struct GaeResult {
    VectorXd advantages;
    VectorXd returns;  // advantages + values
};

// Backward recursion over TD residuals. `values` carries one bootstrap entry
// beyond the horizon (zero when the final state is terminal); `dones` cut the
// recursion at episode boundaries.
GaeResult compute_gae(const VectorXd& rewards, const VectorXd& values,
                      const std::vector<uint8_t>& dones, double gamma, double lambda);

}  // namespace swarm::rl
