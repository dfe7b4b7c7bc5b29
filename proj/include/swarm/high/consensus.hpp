#pragma once

#include "swarm/nn/attention.hpp"
#include "swarm/nn/cells.hpp"
#include "swarm/nn/core.hpp"

namespace swarm::high {

using nn::MatrixXd;
using nn::ParamList;
using nn::VectorXd;

// Consensus communication block: a gated memory cell folds the agent's own
// previous message with its observation; neighbor messages, tagged with a
// learnable distance encoding, are aggregated by multi-head attention; a
// global estimator reads the aggregate. With no neighbors the memory output
// passes straight through.
class ConsensusModule {
 public:
    struct Cache {
        nn::MemoryCell::Cache mem;
        nn::MultiHeadAttention::Cache att;
        nn::DenseNet::Cache est;
        bool passthrough = true;
        VectorXd dists;  // neighbor distances, for encoder backward
        VectorXd m_mid;  // memory output
    };

    ConsensusModule() = default;
    ConsensusModule(const std::string& name, int obs_dim, int label_dim, Rng& rng,
                    int msg_dim = 64, int heads = 4, int est_hidden = 128);

    int msg_dim() const { return msg_dim_; }
    int obs_dim() const { return obs_dim_; }
    int label_dim() const { return label_dim_; }

    // Message for the next step; neighbor_msgs rows pair with dists.
    VectorXd next_message(const VectorXd& m_prev, const VectorXd& obs,
                          const MatrixXd& neighbor_msgs, const VectorXd& dists) const;
    // (next message, estimated global embedding)
    std::pair<VectorXd, VectorXd> forward(const VectorXd& m_prev, const VectorXd& obs,
                                          const MatrixXd& neighbor_msgs, const VectorXd& dists,
                                          Cache* cache = nullptr) const;

    // Accumulates parameter grads for d(loss)/d(ghat) on one sample; incoming
    // messages and observation are data, not differentiated through.
    void backward(const Cache& cache, const VectorXd& dghat);

    void collect_params(ParamList& out);

 private:
    VectorXd message_core(const VectorXd& m_prev, const VectorXd& obs,
                          const MatrixXd& neighbor_msgs, const VectorXd& dists,
                          Cache& cache) const;

    int obs_dim_ = 0, msg_dim_ = 0, label_dim_ = 0;
    nn::MemoryCell memory_;
    nn::DistanceEncoder encoder_;
    nn::MultiHeadAttention attention_;
    nn::DenseNet estimator_;
};

// Mean over batch and dimensions of the squared estimation error.
double consensus_loss(const MatrixXd& ghat, const MatrixXd& labels);

}  // namespace swarm::high
