#include "swarm/high/consensus.hpp"

#include "swarm/high/policy.hpp"

namespace swarm::high {

ConsensusModule::ConsensusModule(const std::string& name, int obs_dim, int label_dim, Rng& rng,
                                 int msg_dim, int heads, int est_hidden)
    : obs_dim_(obs_dim), msg_dim_(msg_dim), label_dim_(label_dim) {
    memory_ = nn::MemoryCell(name + ".mem", msg_dim, obs_dim, rng);
    encoder_ = nn::DistanceEncoder(name + ".dist", msg_dim, rng);
    attention_ = nn::MultiHeadAttention(name + ".att", 2 * msg_dim, msg_dim, heads, rng);
    estimator_ = nn::DenseNet(name + ".est", {msg_dim, est_hidden, est_hidden, label_dim},
                              nn::Act::kTanh, nn::Act::kIdentity, rng);
}

VectorXd ConsensusModule::message_core(const VectorXd& m_prev, const VectorXd& obs,
                                       const MatrixXd& neighbor_msgs, const VectorXd& dists,
                                       Cache& cache) const {
    SWARM_REQUIRE(neighbor_msgs.rows() == dists.size(), "consensus: msgs/dists length mismatch");
    // metric observation scaled into the gate's linear range; messages are
    // already bounded
    cache.m_mid = memory_.forward(m_prev, kObsScale * obs, cache.mem);
    cache.dists = dists;
    const long k = neighbor_msgs.rows();
    if (k == 0) {
        cache.passthrough = true;
        return cache.m_mid;
    }
    cache.passthrough = false;
    VectorXd query(2 * msg_dim_);
    query << cache.m_mid, encoder_.encode(0.0);
    MatrixXd kv(k, 2 * msg_dim_);
    for (long j = 0; j < k; ++j) {
        kv.row(j).head(msg_dim_) = neighbor_msgs.row(j);
        kv.row(j).tail(msg_dim_) = encoder_.encode(dists[j]).transpose();
    }
    return attention_.forward(query, kv, cache.att);
}

VectorXd ConsensusModule::next_message(const VectorXd& m_prev, const VectorXd& obs,
                                       const MatrixXd& neighbor_msgs,
                                       const VectorXd& dists) const {
    Cache cache;
    return message_core(m_prev, obs, neighbor_msgs, dists, cache);
}

std::pair<VectorXd, VectorXd> ConsensusModule::forward(const VectorXd& m_prev,
                                                       const VectorXd& obs,
                                                       const MatrixXd& neighbor_msgs,
                                                       const VectorXd& dists,
                                                       Cache* cache) const {
    Cache local;
    Cache& c = cache ? *cache : local;
    VectorXd m_next = message_core(m_prev, obs, neighbor_msgs, dists, c);
    VectorXd ghat = estimator_.forward(m_next.transpose(), c.est).row(0).transpose();
    return {m_next, ghat};
}

void ConsensusModule::backward(const Cache& cache, const VectorXd& dghat) {
    MatrixXd dm_next = estimator_.backward(cache.est, dghat.transpose());
    VectorXd dm = dm_next.row(0).transpose();
    if (cache.passthrough) {
        memory_.backward(cache.mem, dm);
        return;
    }
    auto [dquery, dkv] = attention_.backward(cache.att, dm);
    memory_.backward(cache.mem, dquery.head(msg_dim_));
    encoder_.backward(0.0, dquery.tail(msg_dim_));
    for (long j = 0; j < dkv.rows(); ++j)
        encoder_.backward(cache.dists[j], dkv.row(j).tail(msg_dim_).transpose());
}

void ConsensusModule::collect_params(ParamList& out) {
    memory_.collect(out);
    encoder_.collect(out);
    attention_.collect(out);
    estimator_.collect(out);
}

double consensus_loss(const MatrixXd& ghat, const MatrixXd& labels) {
    SWARM_REQUIRE(ghat.rows() == labels.rows() && ghat.cols() == labels.cols(),
                  "consensus_loss: shape mismatch");
    return (ghat - labels).array().square().mean();
}

}  // namespace swarm::high
