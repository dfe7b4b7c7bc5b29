#pragma once

#include <memory>

#include "swarm/high/env.hpp"

namespace swarm::high {

// All learnable high-level state: the consensus module (supervised), the
// anchor selector (RL), and the trainer-owned critic. RL updates never write
// into the consensus parameters and vice versa.
struct HighStack {
    std::unique_ptr<ConsensusModule> consensus;
    std::unique_ptr<HighPolicy> policy;

    static HighStack make(const EnvConfig& cfg, char label_variant, uint64_t seed);
    nn::ParamList consensus_params() const;
    nn::ParamList policy_params() const;
};

// One supervised pass over sampled buffer batches; returns the mean loss of
// the final tenth of the iterations. zero_messages trains the ablated arm
// (all message inputs zeroed, same architecture and budget).
double consensus_update(ConsensusModule& module, nn::Adam& opt, const ConsensusBuffer& buffer,
                        int iters, int batch, Rng& rng, bool zero_messages = false);

// Mean label MSE over buffer indices [begin, end).
double consensus_eval(const ConsensusModule& module, const ConsensusBuffer& buffer, size_t begin,
                      size_t end, bool zero_messages = false);

struct HighTrainOptions {
    Config cfg;
    int episodes = 1000;
    adv::AdversaryKind adversary = adv::AdversaryKind::kRuleNearest;
    const low::LowPolicy* adversary_policy = nullptr;
    const low::LowPolicy* low_student = nullptr;  // null: pre-training phase
    bool safe_lidar = false;
    char label_variant = 'A';
};

struct HighTrainResult {
    std::vector<rl::LearnCurvePoint> curve;
    std::vector<double> consensus_losses;  // one per supervised phase
};

HighTrainResult train_high(HighStack& stack, const HighTrainOptions& opt, uint64_t seed,
                           const std::function<void(const rl::LearnCurvePoint&)>& on_episode = {});

}  // namespace swarm::high
