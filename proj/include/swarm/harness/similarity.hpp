#pragma once

#include <vector>

#include "swarm/nn/core.hpp"

namespace swarm::harness {

using nn::MatrixXd;
using nn::VectorXd;

// Pairwise cosine similarities; zero vectors have similarity 0 to everything
// (including themselves), so the unit diagonal applies to nonzero messages.
MatrixXd cosine_matrix(const std::vector<VectorXd>& messages);

// One matrix per decision step from a per-step message log.
std::vector<MatrixXd> similarity_analysis(const std::vector<std::vector<VectorXd>>& message_log,
                                          int decision_interval);

}  // namespace swarm::harness
