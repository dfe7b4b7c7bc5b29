#pragma once

#include "swarm/nn/core.hpp"
#include "swarm/rng.hpp"

namespace swarm::high {

using nn::MatrixXd;
using nn::VectorXd;

// Tiny enumerable two-level MDP for verifying the hierarchical policy
// gradient. The selector is softmax over a finite anchor set with real
// coordinates; the low level either maps (state, anchor) to a fixed action
// bin, or emits a scalar Gaussian action whose bin drives the transition.
// With deterministic_high the anchor is the probability-weighted coordinate
// mix (a differentiable deterministic selector), the regime in which the
// anchor-pathway gradient term is exercised; with a sampled selector that
// term vanishes because the realized anchor is constant in the parameters.
struct EnumMdp {
    int n_states = 0;
    int n_anchors = 0;
    int n_bins = 0;
    VectorXd p0;               // initial state distribution
    MatrixXd anchor_coords;    // n_anchors x coord_dim
    bool gaussian_low = false;
    bool deterministic_high = false;  // requires gaussian_low
    std::vector<std::vector<int>> det_action;  // [state][anchor] -> bin
    MatrixXd mu_w;             // n_states x coord_dim; mu = mu_w.row(s) . coord + mu_b[s]
    VectorXd mu_b;
    double sigma = 1.0;
    VectorXd bin_edges;        // n_bins - 1, ascending
    std::vector<MatrixXd> trans;  // per bin, n_states x n_states row-stochastic
    MatrixXd reward;           // n_states x n_bins
    double gamma = 0.8;

    void validate() const;  // enumerability bounds: <=4 states, <=3 anchors, <=3 bins
};

struct PgCheckResult {
    MatrixXd analytic;    // d J / d theta, n_states x n_anchors
    MatrixXd fd;          // central finite differences of J
    MatrixXd mc;          // Monte-Carlo estimator mean
    MatrixXd mc_stderr;   // per-entry standard error
    double objective = 0.0;
    double max_rel_err_fd = 0.0;
    double max_sigma_distance = 0.0;  // max |mc - analytic| / stderr
    bool mc_within_3se = false;
};

// Exact discounted objective under selector logits theta.
double mdp_objective(const EnumMdp& mdp, const MatrixXd& theta);

PgCheckResult theorem1_check(const EnumMdp& mdp, const MatrixXd& theta, int mc_episodes,
                             int horizon, uint64_t seed);

// Standard fixtures for the verification suite.
EnumMdp fixture_deterministic_low();   // sampled selector, deterministic low
EnumMdp fixture_gaussian_low();        // sampled selector, Gaussian low
EnumMdp fixture_deterministic_high();  // soft-anchor selector, Gaussian low
EnumMdp fixture_uniform_reward();      // constant rewards, gradient must vanish

}  // namespace swarm::high
