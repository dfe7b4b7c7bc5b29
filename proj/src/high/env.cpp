#include "swarm/high/env.hpp"

#include "swarm/grouping.hpp"
#include "swarm/lidar.hpp"

namespace swarm::high {

void ConsensusBuffer::push(ConsensusTuple t) {
    if (tuples_.size() >= capacity_) tuples_.pop_front();
    tuples_.push_back(std::move(t));
}

int label_dim(char variant, int n_agents) {
    SWARM_REQUIRE(variant == 'A' || variant == 'O', "label variant must be A or O");
    return variant == 'A' ? 2 * n_agents : 4 * n_agents;
}

VectorXd build_label(char variant, const WorldState& world, int observer,
                     const std::vector<Vec2>& anchors) {
    const int n = world.n_agents();
    VectorXd g = VectorXd::Zero(label_dim(variant, n));
    if (variant == 'A') {
        for (int j = 0; j < n; ++j) {
            g[2 * j] = anchors[j].x;
            g[2 * j + 1] = anchors[j].y;
        }
    } else {
        const AgentBody& self = world.agents[observer];
        for (int j = 0; j < n; ++j) {
            if (j == observer) continue;
            g[4 * j] = world.agents[j].pos.x - self.pos.x;
            g[4 * j + 1] = world.agents[j].pos.y - self.pos.y;
            g[4 * j + 2] = world.agents[j].vel.x - self.vel.x;
            g[4 * j + 3] = world.agents[j].vel.y - self.vel.y;
        }
    }
    return g;
}

VectorXd student_input(const WorldState& world, int agent, const Vec2& anchor,
                       const std::vector<double>& lidar, int slots, bool safe_lidar) {
    const EnvConfig& cfg = world.cfg;
    VectorXd x = VectorXd::Zero(low::low_input_dim(slots, cfg.lidar_rays));
    x[0] = anchor.x - world.agents[agent].pos.x;
    x[1] = anchor.y - world.agents[agent].pos.y;
    auto obs = observe_vector(world, agent);
    const int nei_off = 3 * cfg.n_targets + 4;
    const int avail = 4 * (cfg.n_agents - 1);
    const int take = std::min(avail, 4 * slots);
    for (int k = 0; k < take; ++k) x[2 + k] = obs[nei_off + k];
    if (safe_lidar) {
        auto safe = low::safe_lidar_transform(lidar, cfg.obs_range);
        for (int m = 0; m < cfg.lidar_rays; ++m) x[2 + 4 * slots + m] = safe[m];
    } else {
        for (int m = 0; m < cfg.lidar_rays; ++m) x[2 + 4 * slots + m] = lidar[m];
    }
    return x;
}

HighLevelEnv::HighLevelEnv(const HighEnvOptions& opt) : opt_(opt) {
    SWARM_REQUIRE(opt_.consensus != nullptr, "HighLevelEnv needs a consensus module");
    SWARM_REQUIRE(opt_.cfg.env.episode_steps % opt_.cfg.env.decision_interval == 0,
                  "episode_steps must be a multiple of decision_interval");
    reset(1);
}

int HighLevelEnv::state_dim() const {
    return 4 * opt_.cfg.env.n_agents + 4 + 3 * opt_.cfg.env.n_targets;
}

int HighLevelEnv::input_dim() const {
    return observation_width(opt_.cfg.env) + opt_.consensus->msg_dim();
}

void HighLevelEnv::reset(uint64_t episode_seed) {
    world_ = init_world(opt_.cfg.env, episode_seed);
    messages_.assign(world_.n_agents(), VectorXd::Zero(opt_.consensus->msg_dim()));
    anchors_.assign(world_.n_agents(), Vec2{0, 0});
    prev_formation_ = 0.0;
    window_ = {};
    tuples_.clear();
    pending_valid_ = false;
    rescan();
}

void HighLevelEnv::rescan() {
    scans_.clear();
    for (int i = 0; i < world_.n_agents(); ++i) scans_.push_back(lidar_scan(world_, i));
}

VectorXd HighLevelEnv::state() const {
    VectorXd s(state_dim());
    int k = 0;
    for (const auto& a : world_.agents) {
        s[k++] = a.pos.x;
        s[k++] = a.pos.y;
        s[k++] = a.vel.x;
        s[k++] = a.vel.y;
    }
    s[k++] = world_.adversary.pos.x;
    s[k++] = world_.adversary.pos.y;
    s[k++] = world_.adversary.vel.x;
    s[k++] = world_.adversary.vel.y;
    for (const auto& t : world_.targets) {
        s[k++] = t.pos.x;
        s[k++] = t.pos.y;
        s[k++] = t.urgency;
    }
    return s;
}

HighLevelEnv::MessageStep HighLevelEnv::advance_messages() {
    const int n = world_.n_agents();
    const int md = opt_.consensus->msg_dim();
    MessageStep ms;
    ms.next.resize(n);
    ms.obs.resize(n);
    ms.inbox_msgs.resize(n);
    ms.inbox_dists.resize(n);
    for (int i = 0; i < n; ++i) {
        auto obs_std = observe_vector(world_, i);
        ms.obs[i] = Eigen::Map<const VectorXd>(obs_std.data(), obs_std.size());
        auto xi = neighbor_set(world_, i);
        MatrixXd msgs(xi.size(), md);
        VectorXd dists(xi.size());
        for (size_t j = 0; j < xi.size(); ++j) {
            msgs.row(j) = messages_[xi[j]].transpose();
            dists[j] = distance(world_.agents[i].pos, world_.agents[xi[j]].pos);
        }
        ms.inbox_msgs[i] = std::move(msgs);
        ms.inbox_dists[i] = std::move(dists);
        ms.next[i] = opt_.consensus->next_message(messages_[i], ms.obs[i], ms.inbox_msgs[i],
                                                  ms.inbox_dists[i]);
    }
    return ms;
}

void HighLevelEnv::log_tuples(const MessageStep& ms) {
    if (!opt_.collect_tuples || world_.t < 1) return;
    for (int i = 0; i < world_.n_agents(); ++i) {
        ConsensusTuple t;
        t.obs = ms.obs[i];
        t.m_prev = messages_[i];
        t.neighbor_msgs = ms.inbox_msgs[i];
        t.neighbor_dists = ms.inbox_dists[i];
        t.label = build_label(opt_.label_variant, world_, i, anchors_);
        t.anchor = anchors_[i];
        tuples_.push_back(std::move(t));
    }
}

void HighLevelEnv::world_step(const MessageStep& ms) {
    const int n = world_.n_agents();
    std::vector<Vec2> u(n);
    for (int i = 0; i < n; ++i) {
        if (opt_.low_student) {
            // task_dim = 2 + 4*slots
            VectorXd x = student_input(world_, i, anchors_[i], scans_[i],
                                       (opt_.low_student->task_dim() - 2) / 4, opt_.safe_lidar);
            MatrixXd mu = opt_.low_student->mean_batch(x.transpose());
            u[i] = {mu(0, 0), mu(0, 1)};
        } else {
            u[i] = nav_only_action(anchors_[i], world_.agents[i].pos, world_.agents[i].vel, 1.0,
                                   0.5, opt_.cfg.env.accel_max);
        }
    }
    Vec2 av = adv::adversary_action(opt_.adversary, world_, opt_.adversary_policy, nullptr);
    swarm::step(world_, u, av);
    rescan();
    for (int i = 0; i < n; ++i) messages_[i] = ms.next[i];

    // high-level reward pieces accumulate over the window; navigation uses
    // pre-decay urgencies
    Grouping g = partition_groups(world_);
    window_.navigation += navigation_reward(world_);
    std::vector<double> urg;
    for (const auto& t : world_.targets) urg.push_back(t.urgency);
    window_.task += task_reward_and_decay(world_, g, opt_.cfg.constants, urg);
    for (size_t k = 0; k < urg.size(); ++k) world_.targets[k].urgency = urg[k];
    window_.evasion += evasion_reward(world_, opt_.cfg.constants);
    double f_step = formation_reward(g, world_, prev_formation_, opt_.cfg.constants, nullptr);
    window_.formation += f_step;
    prev_formation_ = f_step;
}

MatrixXd HighLevelEnv::observe_inputs() {
    pending_ = advance_messages();
    pending_valid_ = true;
    const int n = world_.n_agents();
    MatrixXd x(n, input_dim());
    for (int i = 0; i < n; ++i) {
        x.row(i).head(pending_.obs[i].size()) = pending_.obs[i].transpose();
        x.row(i).tail(opt_.consensus->msg_dim()) = pending_.next[i].transpose();
    }
    return x;
}

double HighLevelEnv::step(const MatrixXd& actions) {
    SWARM_REQUIRE(pending_valid_, "step before observe_inputs");
    window_ = {};

    // tuples for the decision step are labeled with the anchors held before
    // re-selection
    log_tuples(pending_);
    for (int i = 0; i < world_.n_agents(); ++i)
        anchors_[i] = anchor_from_index(static_cast<int>(actions(i, 0)));
    world_step(pending_);
    pending_valid_ = false;

    for (int k = 1; k < opt_.cfg.env.decision_interval; ++k) {
        MessageStep ms = advance_messages();
        log_tuples(ms);
        world_step(ms);
    }
    return opt_.cfg.weights.w_t * window_.task + opt_.cfg.weights.w_n_high * window_.navigation +
           opt_.cfg.weights.w_e * window_.evasion;
}

}  // namespace swarm::high
