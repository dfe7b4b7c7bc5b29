#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "swarm/common.hpp"
#include "swarm/rng.hpp"

namespace swarm::nn {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// One trainable tensor: value plus gradient accumulator. Backward passes add
// into g; the owning trainer zeroes between updates.
struct Param {
    std::string name;
    MatrixXd w;
    MatrixXd g;

    Param(std::string n, int rows, int cols)
        : name(std::move(n)), w(MatrixXd::Zero(rows, cols)), g(MatrixXd::Zero(rows, cols)) {}
};

using ParamList = std::vector<Param*>;

enum class Act { kTanh, kIdentity };

// Fills W (rows x cols) with a gain-scaled orthogonal matrix: W^T W = gain^2 I
// for tall shapes, W W^T = gain^2 I for wide ones.
void orthogonal_init(MatrixXd& w, double gain, Rng& rng);

// Plain MLP, y = act(x W^T + b) per layer, batched over rows.
class DenseNet {
 public:
    struct Cache {
        std::vector<MatrixXd> inputs;  // input to each layer
        std::vector<MatrixXd> outputs; // post-activation of each layer
    };

    DenseNet() = default;
    // dims = {in, h1, ..., out}; hidden layers use `hidden`, last uses `output`.
    DenseNet(const std::string& name, const std::vector<int>& dims, Act hidden, Act output,
             Rng& rng, double hidden_gain = std::sqrt(2.0), double output_gain = 1.0);

    MatrixXd forward(const MatrixXd& x) const;
    MatrixXd forward(const MatrixXd& x, Cache& cache) const;
    // Accumulates parameter grads, returns d(loss)/d(input).
    MatrixXd backward(const Cache& cache, const MatrixXd& dy);

    void collect(ParamList& out);
    int in_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_[0].W->w.cols()); }
    int out_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().W->w.rows()); }
    Param& output_weight() { return *layers_.back().W; }
    Param& output_bias() { return *layers_.back().b; }

 private:
    struct Layer {
        std::unique_ptr<Param> W;  // out x in
        std::unique_ptr<Param> b;  // out x 1
        Act act = Act::kTanh;
    };
    std::vector<Layer> layers_;
};

double global_grad_norm(const ParamList& params);
// Scales all gradients so the global norm is at most max_norm.
void clip_grad_norm(const ParamList& params, double max_norm);

// Adam with bias correction; state is keyed by parameter order.
class Adam {
 public:
    Adam(ParamList params, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void zero_grad();
    void step();
    void set_lr(double lr) { lr_ = lr; }
    double lr() const { return lr_; }

 private:
    ParamList params_;
    std::vector<MatrixXd> m_, v_;
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace swarm::nn
