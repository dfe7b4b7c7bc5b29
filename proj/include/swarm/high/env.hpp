#pragma once

#include <deque>

#include "swarm/adversary.hpp"
#include "swarm/high/consensus.hpp"
#include "swarm/high/policy.hpp"
#include "swarm/low/policy.hpp"
#include "swarm/observation.hpp"
#include "swarm/rewards.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::high {

// One logged supervision sample: everything needed to recompute the message
// pipeline on fixed inputs, plus the label.
struct ConsensusTuple {
    VectorXd obs;
    VectorXd m_prev;
    MatrixXd neighbor_msgs;  // k x msg_dim
    VectorXd neighbor_dists;
    VectorXd label;
    Vec2 anchor;  // the tuple owner's held anchor
};

class ConsensusBuffer {
 public:
    explicit ConsensusBuffer(size_t capacity) : capacity_(capacity) {}
    void push(ConsensusTuple t);
    size_t size() const { return tuples_.size(); }
    const ConsensusTuple& at(size_t i) const { return tuples_[i]; }

 private:
    size_t capacity_;
    std::deque<ConsensusTuple> tuples_;
};

// Label builders. Variant 'A': every agent's held anchor, fixed agent order
// (2N). Variant 'O': every agent's position/velocity relative to the
// observer, fixed order, self slots zero (4N).
int label_dim(char variant, int n_agents);
VectorXd build_label(char variant, const WorldState& world, int observer,
                     const std::vector<Vec2>& anchors);

// Low-level action used below the selector: proportional navigation while
// pre-training, the distilled student when fine-tuning. The student consumes
// [anchor_rel | first `slots` neighbor entries | lidar].
VectorXd student_input(const WorldState& world, int agent, const Vec2& anchor,
                       const std::vector<double>& lidar, int slots, bool safe_lidar);

struct HighEnvOptions {
    Config cfg;
    const ConsensusModule* consensus = nullptr;  // required
    const low::LowPolicy* low_student = nullptr; // null: nav-only phase
    bool safe_lidar = false;
    adv::AdversaryKind adversary = adv::AdversaryKind::kRuleNearest;
    const low::LowPolicy* adversary_policy = nullptr;
    char label_variant = 'A';
    bool collect_tuples = true;
};

// Decision-step environment: one RolloutEnv step = decision_interval world
// steps under held anchors; the reward is the summed high-level mix over the
// window. Messages advance every world step; supervision tuples are logged
// from step 1 on, labeled with the anchors in effect when the observation
// was taken.
class HighLevelEnv : public rl::RolloutEnv {
 public:
    explicit HighLevelEnv(const HighEnvOptions& opt);

    void reset(uint64_t episode_seed) override;
    int horizon() const override {
        return opt_.cfg.env.episode_steps / opt_.cfg.env.decision_interval;
    }
    int n_policy_agents() const override { return opt_.cfg.env.n_agents; }
    int state_dim() const override;
    int input_dim() const override;
    VectorXd state() const override;
    MatrixXd observe_inputs() override;
    double step(const MatrixXd& actions) override;
    RewardBreakdown components() const override { return window_; }

    std::vector<ConsensusTuple>& tuples() { return tuples_; }
    const WorldState& world() const { return world_; }
    const std::vector<Vec2>& anchors() const { return anchors_; }
    const std::vector<VectorXd>& messages() const { return messages_; }

 private:
    struct MessageStep {
        std::vector<VectorXd> next;        // per agent m^{t+1}
        std::vector<VectorXd> obs;         // per agent o^{t}
        std::vector<MatrixXd> inbox_msgs;  // per agent
        std::vector<VectorXd> inbox_dists;
    };
    MessageStep advance_messages();
    void log_tuples(const MessageStep& ms);
    void world_step(const MessageStep& ms);
    void rescan();

    HighEnvOptions opt_;
    WorldState world_;
    std::vector<VectorXd> messages_;
    std::vector<Vec2> anchors_;
    std::vector<std::vector<double>> scans_;
    double prev_formation_ = 0.0;
    RewardBreakdown window_;
    std::vector<ConsensusTuple> tuples_;
    MessageStep pending_;
    bool pending_valid_ = false;
};

}  // namespace swarm::high
