#include "swarm/nn/core.hpp"

namespace swarm::nn {

void orthogonal_init(MatrixXd& w, double gain, Rng& rng) {
    const long rows = w.rows(), cols = w.cols();
    const bool wide = cols > rows;
    const long r = wide ? cols : rows, c = wide ? rows : cols;
    MatrixXd a(r, c);
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) a(i, j) = rng.normal();
    Eigen::HouseholderQR<MatrixXd> qr(a);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(r, c);
    MatrixXd rmat = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
    for (long j = 0; j < c; ++j)
        if (rmat(j, j) < 0) q.col(j) = -q.col(j);
    w = gain * (wide ? MatrixXd(q.transpose()) : q);
}

DenseNet::DenseNet(const std::string& name, const std::vector<int>& dims, Act hidden, Act output,
                   Rng& rng, double hidden_gain, double output_gain) {
    SWARM_REQUIRE(dims.size() >= 2, "DenseNet needs at least one layer");
    for (size_t l = 0; l + 1 < dims.size(); ++l) {
        Layer layer;
        const bool last = (l + 2 == dims.size());
        layer.W = std::make_unique<Param>(name + ".w" + std::to_string(l), dims[l + 1], dims[l]);
        layer.b = std::make_unique<Param>(name + ".b" + std::to_string(l), dims[l + 1], 1);
        orthogonal_init(layer.W->w, last ? output_gain : hidden_gain, rng);
        layer.act = last ? output : hidden;
        layers_.push_back(std::move(layer));
    }
}

MatrixXd DenseNet::forward(const MatrixXd& x) const {
    MatrixXd h = x;
    for (const auto& l : layers_) {
        h = (h * l.W->w.transpose()).rowwise() + l.b->w.col(0).transpose();
        if (l.act == Act::kTanh) h = h.array().tanh();
    }
    return h;
}

MatrixXd DenseNet::forward(const MatrixXd& x, Cache& cache) const {
    cache.inputs.clear();
    cache.outputs.clear();
    MatrixXd h = x;
    for (const auto& l : layers_) {
        cache.inputs.push_back(h);
        h = (h * l.W->w.transpose()).rowwise() + l.b->w.col(0).transpose();
        if (l.act == Act::kTanh) h = h.array().tanh();
        cache.outputs.push_back(h);
    }
    return h;
}

MatrixXd DenseNet::backward(const Cache& cache, const MatrixXd& dy) {
    SWARM_REQUIRE(cache.inputs.size() == layers_.size(), "DenseNet backward: stale cache");
    MatrixXd grad = dy;
    for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
        Layer& layer = layers_[l];
        MatrixXd dz;
        if (layer.act == Act::kTanh) {
            dz = grad.array() * (1.0 - cache.outputs[l].array().square());
        } else {
            dz = grad;
        }
        layer.W->g.noalias() += dz.transpose() * cache.inputs[l];
        layer.b->g.col(0).noalias() += dz.colwise().sum().transpose();
        grad.noalias() = dz * layer.W->w;
    }
    return grad;
}

void DenseNet::collect(ParamList& out) {
    for (auto& l : layers_) {
        out.push_back(l.W.get());
        out.push_back(l.b.get());
    }
}

double global_grad_norm(const ParamList& params) {
    double sq = 0.0;
    for (const Param* p : params) sq += p->g.squaredNorm();
    return std::sqrt(sq);
}

void clip_grad_norm(const ParamList& params, double max_norm) {
    double norm = global_grad_norm(params);
    if (norm <= max_norm || norm == 0.0) return;
    double scale = max_norm / norm;
    for (Param* p : params) p->g *= scale;
}

Adam::Adam(ParamList params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const Param* p : params_) {
        m_.push_back(MatrixXd::Zero(p->w.rows(), p->w.cols()));
        v_.push_back(MatrixXd::Zero(p->w.rows(), p->w.cols()));
    }
}

void Adam::zero_grad() {
    for (Param* p : params_) p->g.setZero();
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params_.size(); ++i) {
        Param* p = params_[i];
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p->g;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p->g.array().square().matrix();
        MatrixXd mhat = m_[i] / bc1;
        MatrixXd vhat = v_[i] / bc2;
        p->w.array() -= lr_ * mhat.array() / (vhat.array().sqrt() + eps_);
    }
}

}  // namespace swarm::nn
