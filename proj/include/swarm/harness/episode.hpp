#pragma once

#include <optional>

#include "swarm/adversary.hpp"
#include "swarm/high/env.hpp"

namespace swarm::harness {

using high::ConsensusModule;
using high::HighPolicy;
using low::LowPolicy;
using nn::MatrixXd;
using nn::VectorXd;

// What one agent computes in one step, given only its local view. The same
// core runs inside the single-process episode loop and inside each agent
// process of the distributed runtime, so the two modes stay behaviorally
// identical.
class AgentCore {
 public:
    struct Options {
        const ConsensusModule* consensus = nullptr;  // null: no messaging
        const HighPolicy* selector = nullptr;        // null: fixed anchor
        const LowPolicy* low = nullptr;              // null: proportional nav
        bool safe_lidar = false;
        int decision_interval = 10;
        int student_slots = 7;
        double accel_max = 1.0;
        double lidar_cap = 3.0;
        int n_targets = 2;
        std::optional<Vec2> fixed_anchor;
        int msg_dim = 64;
    };

    struct In {
        VectorXd obs;
        std::vector<double> lidar;
        MatrixXd msgs;      // k x msg_dim, xi-ordered
        VectorXd dists;     // k
        Vec2 pos, vel;      // own pose
        int t = 0;
    };

    struct Out {
        Vec2 accel;
        VectorXd message;
        Vec2 anchor;
    };

    explicit AgentCore(const Options& opt);
    void reset();
    // rng null selects deterministic actions (mean / argmax).
    Out act(const In& in, Rng* rng);

 private:
    Options opt_;
    VectorXd m_prev_;
    Vec2 anchor_{0, 0};
};

struct TrajAgentStep {
    Vec2 pos, vel, accel, anchor;
};

struct TrajStep {
    int t = 0;
    std::vector<TrajAgentStep> agents;
    Vec2 adv_pos, adv_vel, adv_accel;
    bool has_adversary = false;
    RewardBreakdown comps;
    double reward_low = 0.0, reward_high = 0.0;
    std::vector<VectorXd> messages;  // broadcast emitted this step
};

struct Trajectory {
    EnvConfig cfg;
    std::vector<Obstacle> obstacles;
    std::vector<Vec2> targets;
    std::vector<TrajStep> steps;
};

// Supplies all agents' outputs for a step; locally by calling AgentCores,
// or remotely over the wire in the distributed runtime.
class ActProvider {
 public:
    virtual ~ActProvider() = default;
    virtual void start_episode() {}
    virtual std::vector<AgentCore::Out> act_all(const std::vector<AgentCore::In>& ins, int t) = 0;
};

class LocalProvider : public ActProvider {
 public:
    LocalProvider(const AgentCore::Options& opt, int n_agents, Rng* sample_rng = nullptr);
    void start_episode() override;
    std::vector<AgentCore::Out> act_all(const std::vector<AgentCore::In>& ins, int t) override;

 private:
    std::vector<AgentCore> cores_;
    Rng* rng_;
};

struct EpisodeOptions {
    Config cfg;
    adv::AdversaryKind adversary = adv::AdversaryKind::kNone;
    const LowPolicy* adversary_policy = nullptr;
    std::optional<Vec2> fixed_anchor;  // low-mode eval anchor (also metrics reference)
    bool record_messages = true;
    int msg_dim = 64;
};

// Steps a fresh world to the horizon: local observation construction,
// host-routed message exchange (one-step delay), adversary, rewards. Pure
// function of (options, provider behavior, seed).
Trajectory run_episode(const EpisodeOptions& opt, ActProvider& provider, uint64_t seed);

// Builds the per-agent inputs for the current world state. Exposed for the
// distributed host, which sends them over the wire.
std::vector<AgentCore::In> build_agent_inputs(WorldState& world,
                                              const std::vector<std::vector<double>>& scans,
                                              const std::vector<VectorXd>& messages, int msg_dim);

}  // namespace swarm::harness
