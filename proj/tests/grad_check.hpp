// Central finite-difference gradient checking shared by the unit tests and
// the acceptance suite.
#pragma once

#include <functional>

#include "swarm/nn/core.hpp"
#include "swarm/rng.hpp"

namespace gradcheck {

using swarm::nn::MatrixXd;
using swarm::nn::ParamList;

inline double rel_err(double fd, double an) {
    double denom = std::max({std::abs(fd), std::abs(an), 1e-3});
    return std::abs(fd - an) / denom;
}

// `loss` recomputes the scalar objective from current parameter values;
// `run_backward` zeroes grads and reruns forward+backward so p->g holds the
// analytic gradient. Large tensors are subsampled.
inline double max_param_rel_err(const ParamList& params, const std::function<double()>& loss,
                                const std::function<void()>& run_backward,
                                int max_entries_per_tensor = 200, double h = 1e-5,
                                uint64_t seed = 12345) {
    run_backward();
    std::vector<MatrixXd> analytic;
    analytic.reserve(params.size());
    for (const auto* p : params) analytic.push_back(p->g);

    swarm::Rng rng(seed);
    double worst = 0.0;
    for (size_t pi = 0; pi < params.size(); ++pi) {
        swarm::nn::Param* p = params[pi];
        const long total = p->w.size();
        const long n_check = std::min<long>(total, max_entries_per_tensor);
        for (long k = 0; k < n_check; ++k) {
            long idx = (total == n_check) ? k : static_cast<long>(rng.uniform_index(total));
            long r = idx / p->w.cols(), c = idx % p->w.cols();
            double saved = p->w(r, c);
            p->w(r, c) = saved + h;
            double lp = loss();
            p->w(r, c) = saved - h;
            double lm = loss();
            p->w(r, c) = saved;
            double fd = (lp - lm) / (2 * h);
            worst = std::max(worst, rel_err(fd, analytic[pi](r, c)));
        }
    }
    return worst;
}

// Same drill for an input matrix; `analytic_dx` is the backward's dX.
inline double max_input_rel_err(MatrixXd& x, const std::function<double()>& loss,
                                const MatrixXd& analytic_dx, int max_entries = 200,
                                double h = 1e-5, uint64_t seed = 54321) {
    swarm::Rng rng(seed);
    const long total = x.size();
    const long n_check = std::min<long>(total, max_entries);
    double worst = 0.0;
    for (long k = 0; k < n_check; ++k) {
        long idx = (total == n_check) ? k : static_cast<long>(rng.uniform_index(total));
        long r = idx / x.cols(), c = idx % x.cols();
        double saved = x(r, c);
        x(r, c) = saved + h;
        double lp = loss();
        x(r, c) = saved - h;
        double lm = loss();
        x(r, c) = saved;
        double fd = (lp - lm) / (2 * h);
        worst = std::max(worst, rel_err(fd, analytic_dx(r, c)));
    }
    return worst;
}

}  // namespace gradcheck
