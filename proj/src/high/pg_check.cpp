#include "swarm/high/pg_check.hpp"

#include "swarm/common.hpp"

namespace swarm::high {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z * kInvSqrt2)); }
double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

MatrixXd softmax_rows(const MatrixXd& logits) {
    MatrixXd out(logits.rows(), logits.cols());
    for (long r = 0; r < logits.rows(); ++r) {
        double mx = logits.row(r).maxCoeff();
        Eigen::ArrayXd e = (logits.row(r).array() - mx).exp();
        out.row(r) = (e / e.sum()).matrix();
    }
    return out;
}

// P(bin b | mu): Gaussian mass between edges.
double bin_prob(const EnumMdp& mdp, double mu, int b) {
    double lo = (b == 0) ? -std::numeric_limits<double>::infinity() : mdp.bin_edges[b - 1];
    double hi = (b == mdp.n_bins - 1) ? std::numeric_limits<double>::infinity()
                                      : mdp.bin_edges[b];
    double c_hi = std::isinf(hi) ? 1.0 : normal_cdf((hi - mu) / mdp.sigma);
    double c_lo = std::isinf(lo) ? 0.0 : normal_cdf((lo - mu) / mdp.sigma);
    return c_hi - c_lo;
}

// d P(bin b | mu) / d mu.
double bin_prob_dmu(const EnumMdp& mdp, double mu, int b) {
    double lo = (b == 0) ? -std::numeric_limits<double>::infinity() : mdp.bin_edges[b - 1];
    double hi = (b == mdp.n_bins - 1) ? std::numeric_limits<double>::infinity()
                                      : mdp.bin_edges[b];
    double p_hi = std::isinf(hi) ? 0.0 : normal_pdf((hi - mu) / mdp.sigma);
    double p_lo = std::isinf(lo) ? 0.0 : normal_pdf((lo - mu) / mdp.sigma);
    return (p_lo - p_hi) / mdp.sigma;
}

int bin_of(const EnumMdp& mdp, double u) {
    for (int b = 0; b < mdp.n_bins - 1; ++b)
        if (u < mdp.bin_edges[b]) return b;
    return mdp.n_bins - 1;
}

double mu_of(const EnumMdp& mdp, int s, const VectorXd& coord) {
    return mdp.mu_w.row(s).dot(coord) + mdp.mu_b[s];
}

// P_L(b | s, anchor a) for the sampled-selector case.
double low_prob(const EnumMdp& mdp, int s, int a, int b) {
    if (!mdp.gaussian_low) return mdp.det_action[s][a] == b ? 1.0 : 0.0;
    return bin_prob(mdp, mu_of(mdp, s, mdp.anchor_coords.row(a).transpose()), b);
}

struct Solved {
    MatrixXd F;      // n_states x n_bins
    VectorXd V;      // state values
    MatrixXd Q;      // n_states x n_bins
    VectorXd rho;    // discounted state visitation
    double J;
};

Solved solve(const EnumMdp& mdp, const MatrixXd& theta) {
    const int S = mdp.n_states, B = mdp.n_bins;
    MatrixXd pi = softmax_rows(theta);

    MatrixXd F = MatrixXd::Zero(S, B);
    if (mdp.deterministic_high) {
        for (int s = 0; s < S; ++s) {
            VectorXd coord = mdp.anchor_coords.transpose() * pi.row(s).transpose();
            double mu = mu_of(mdp, s, coord);
            for (int b = 0; b < B; ++b) F(s, b) = bin_prob(mdp, mu, b);
        }
    } else {
        for (int s = 0; s < S; ++s)
            for (int b = 0; b < B; ++b)
                for (int a = 0; a < mdp.n_anchors; ++a)
                    F(s, b) += pi(s, a) * low_prob(mdp, s, a, b);
    }

    MatrixXd Pf = MatrixXd::Zero(S, S);
    VectorXd rf = VectorXd::Zero(S);
    for (int s = 0; s < S; ++s)
        for (int b = 0; b < B; ++b) {
            Pf.row(s) += F(s, b) * mdp.trans[b].row(s);
            rf[s] += F(s, b) * mdp.reward(s, b);
        }

    Solved out;
    out.F = F;
    out.V = (MatrixXd::Identity(S, S) - mdp.gamma * Pf).colPivHouseholderQr().solve(rf);
    out.Q.resize(S, B);
    for (int s = 0; s < S; ++s)
        for (int b = 0; b < B; ++b)
            out.Q(s, b) = mdp.reward(s, b) + mdp.gamma * mdp.trans[b].row(s).dot(out.V);
    out.rho = (MatrixXd::Identity(S, S) - mdp.gamma * Pf.transpose())
                  .colPivHouseholderQr()
                  .solve(mdp.p0);
    out.J = mdp.p0.dot(out.V);
    return out;
}

}  // namespace

void EnumMdp::validate() const {
    if (n_states < 1 || n_states > 4 || n_anchors < 1 || n_anchors > 3 || n_bins < 1 ||
        n_bins > 3)
        throw ContractError("EnumMdp: not enumerable (bounds: 4 states, 3 anchors, 3 bins)");
    if (deterministic_high && !gaussian_low)
        throw ContractError("EnumMdp: deterministic selector requires the Gaussian low level");
    if (static_cast<int>(trans.size()) != n_bins) throw ContractError("EnumMdp: trans size");
    for (const auto& T : trans)
        for (long r = 0; r < T.rows(); ++r)
            if (std::abs(T.row(r).sum() - 1.0) > 1e-12)
                throw ContractError("EnumMdp: transition rows must sum to 1");
    if (std::abs(p0.sum() - 1.0) > 1e-12) throw ContractError("EnumMdp: p0 must sum to 1");
}

double mdp_objective(const EnumMdp& mdp, const MatrixXd& theta) { return solve(mdp, theta).J; }

PgCheckResult theorem1_check(const EnumMdp& mdp, const MatrixXd& theta, int mc_episodes,
                             int horizon, uint64_t seed) {
    mdp.validate();
    const int S = mdp.n_states, A = mdp.n_anchors, B = mdp.n_bins;
    Solved sol = solve(mdp, theta);
    MatrixXd pi = softmax_rows(theta);

    PgCheckResult res;
    res.objective = sol.J;

    // ---- exact gradient via the discounted visitation sum ----
    res.analytic = MatrixXd::Zero(S, A);
    for (int s = 0; s < S; ++s) {
        if (mdp.deterministic_high) {
            VectorXd coord = mdp.anchor_coords.transpose() * pi.row(s).transpose();
            double mu = mu_of(mdp, s, coord);
            for (int a = 0; a < A; ++a) {
                // d mu / d theta(s,a) through the soft anchor
                double dmu = mdp.mu_w.row(s).dot(
                    (pi(s, a) * (mdp.anchor_coords.row(a).transpose() - coord)));
                double acc = 0.0;
                for (int b = 0; b < B; ++b)
                    acc += sol.Q(s, b) * bin_prob_dmu(mdp, mu, b) * dmu;
                res.analytic(s, a) = sol.rho[s] * acc;
            }
        } else {
            for (int a = 0; a < A; ++a) {
                double acc = 0.0;
                for (int b = 0; b < B; ++b) {
                    double dF = 0.0;
                    for (int a2 = 0; a2 < A; ++a2) {
                        double dpi = pi(s, a2) * ((a2 == a ? 1.0 : 0.0) - pi(s, a));
                        dF += low_prob(mdp, s, a2, b) * dpi;
                    }
                    acc += sol.Q(s, b) * dF;
                }
                res.analytic(s, a) = sol.rho[s] * acc;
            }
        }
    }

    // ---- central finite differences of the exact objective ----
    res.fd = MatrixXd::Zero(S, A);
    MatrixXd th = theta;
    const double h = 1e-6;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double saved = th(s, a);
            th(s, a) = saved + h;
            double jp = mdp_objective(mdp, th);
            th(s, a) = saved - h;
            double jm = mdp_objective(mdp, th);
            th(s, a) = saved;
            res.fd(s, a) = (jp - jm) / (2 * h);
        }
    res.max_rel_err_fd = 0.0;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double denom = std::max({std::abs(res.fd(s, a)), std::abs(res.analytic(s, a)), 1e-8});
            res.max_rel_err_fd =
                std::max(res.max_rel_err_fd, std::abs(res.fd(s, a) - res.analytic(s, a)) / denom);
        }

    // ---- Monte-Carlo estimator of the expectation form ----
    Rng rng(Rng::derive(seed, 0x714));
    MatrixXd sum = MatrixXd::Zero(S, A), sum_sq = MatrixXd::Zero(S, A);
    for (int ep = 0; ep < mc_episodes; ++ep) {
        MatrixXd g = MatrixXd::Zero(S, A);
        // sample s0 ~ p0
        double u0 = rng.uniform01();
        int s = 0;
        {
            double cum = 0.0;
            for (int k = 0; k < S; ++k) {
                cum += mdp.p0[k];
                if (u0 < cum) {
                    s = k;
                    break;
                }
                s = k;
            }
        }
        double discount = 1.0;
        for (int t = 0; t < horizon; ++t) {
            int b;
            if (mdp.deterministic_high) {
                VectorXd coord = mdp.anchor_coords.transpose() * pi.row(s).transpose();
                double mu = mu_of(mdp, s, coord);
                double u = rng.normal(mu, mdp.sigma);
                b = bin_of(mdp, u);
                // anchor-pathway score: grad_mu ln N(u; mu, sigma) * dmu/dtheta
                double score_mu = (u - mu) / (mdp.sigma * mdp.sigma);
                for (int a = 0; a < A; ++a) {
                    double dmu = mdp.mu_w.row(s).dot(
                        (pi(s, a) * (mdp.anchor_coords.row(a).transpose() - coord)));
                    g(s, a) += discount * score_mu * dmu * sol.Q(s, b);
                }
            } else {
                // sample anchor from the softmax selector
                double ua = rng.uniform01();
                int a = A - 1;
                double cum = 0.0;
                for (int k = 0; k < A; ++k) {
                    cum += pi(s, k);
                    if (ua < cum) {
                        a = k;
                        break;
                    }
                }
                if (!mdp.gaussian_low) {
                    b = mdp.det_action[s][a];
                } else {
                    double mu = mu_of(mdp, s, mdp.anchor_coords.row(a).transpose());
                    b = bin_of(mdp, rng.normal(mu, mdp.sigma));
                }
                // score-function term: grad ln pi(a|s); the realized-anchor
                // pathway is constant in theta, so only this term survives
                for (int a2 = 0; a2 < A; ++a2)
                    g(s, a2) += discount * ((a2 == a ? 1.0 : 0.0) - pi(s, a2)) * sol.Q(s, b);
            }
            // transition
            double ut = rng.uniform01();
            double cum = 0.0;
            int s_next = S - 1;
            for (int k = 0; k < S; ++k) {
                cum += mdp.trans[b](s, k);
                if (ut < cum) {
                    s_next = k;
                    break;
                }
            }
            s = s_next;
            discount *= mdp.gamma;
        }
        sum += g;
        sum_sq += g.cwiseProduct(g);
    }
    res.mc = sum / mc_episodes;
    res.mc_stderr.resize(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double var = sum_sq(s, a) / mc_episodes - res.mc(s, a) * res.mc(s, a);
            res.mc_stderr(s, a) = std::sqrt(std::max(var, 0.0) / mc_episodes);
        }

    res.max_sigma_distance = 0.0;
    res.mc_within_3se = true;
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
            double se = res.mc_stderr(s, a);
            double diff = std::abs(res.mc(s, a) - res.analytic(s, a));
            if (se < 1e-12) {
                if (diff > 1e-9) res.mc_within_3se = false;
                continue;
            }
            res.max_sigma_distance = std::max(res.max_sigma_distance, diff / se);
            if (diff > 3.0 * se) res.mc_within_3se = false;
        }
    return res;
}

EnumMdp fixture_deterministic_low() {
    EnumMdp m;
    m.n_states = 3;
    m.n_anchors = 2;
    m.n_bins = 2;
    m.p0 = VectorXd::Zero(3);
    m.p0 << 0.6, 0.4, 0.0;
    m.anchor_coords = MatrixXd(2, 1);
    m.anchor_coords << -1.0, 1.0;
    m.gaussian_low = false;
    m.det_action = {{0, 1}, {1, 0}, {0, 0}};
    m.trans.assign(2, MatrixXd(3, 3));
    m.trans[0] << 0.7, 0.2, 0.1, 0.1, 0.6, 0.3, 0.3, 0.3, 0.4;
    m.trans[1] << 0.2, 0.5, 0.3, 0.4, 0.1, 0.5, 0.25, 0.25, 0.5;
    m.reward = MatrixXd(3, 2);
    m.reward << 1.0, -0.5, 0.2, 0.8, -1.0, 0.4;
    m.gamma = 0.8;
    return m;
}

EnumMdp fixture_gaussian_low() {
    EnumMdp m;
    m.n_states = 2;
    m.n_anchors = 3;
    m.n_bins = 3;
    m.p0 = VectorXd::Zero(2);
    m.p0 << 0.5, 0.5;
    m.anchor_coords = MatrixXd(3, 2);
    m.anchor_coords << -1.0, 0.5, 0.0, -1.0, 1.0, 1.0;
    m.gaussian_low = true;
    m.mu_w = MatrixXd(2, 2);
    m.mu_w << 1.0, -0.5, 0.7, 0.9;
    m.mu_b = VectorXd::Zero(2);
    m.mu_b << 0.1, -0.2;
    m.sigma = 0.8;
    m.bin_edges = VectorXd(2);
    m.bin_edges << -0.4, 0.5;
    m.trans.assign(3, MatrixXd(2, 2));
    m.trans[0] << 0.9, 0.1, 0.4, 0.6;
    m.trans[1] << 0.5, 0.5, 0.2, 0.8;
    m.trans[2] << 0.1, 0.9, 0.7, 0.3;
    m.reward = MatrixXd(2, 3);
    m.reward << 0.3, -0.2, 1.1, -0.6, 0.9, 0.0;
    m.gamma = 0.8;
    return m;
}

EnumMdp fixture_deterministic_high() {
    EnumMdp m = fixture_gaussian_low();
    m.deterministic_high = true;
    return m;
}

EnumMdp fixture_uniform_reward() {
    EnumMdp m = fixture_deterministic_low();
    m.reward.setConstant(0.7);
    return m;
}

}  // namespace swarm::high
