#include "swarm/harness/episode.hpp"

#include "swarm/grouping.hpp"
#include "swarm/lidar.hpp"

namespace swarm::harness {

AgentCore::AgentCore(const Options& opt) : opt_(opt) { reset(); }

void AgentCore::reset() {
    m_prev_ = VectorXd::Zero(opt_.msg_dim);
    anchor_ = opt_.fixed_anchor.value_or(Vec2{0, 0});
}

AgentCore::Out AgentCore::act(const In& in, Rng* rng) {
    Out out;
    if (opt_.consensus) {
        out.message = opt_.consensus->next_message(m_prev_, in.obs, in.msgs, in.dists);
    } else {
        out.message = VectorXd::Zero(opt_.msg_dim);
    }

    if (opt_.fixed_anchor) {
        anchor_ = *opt_.fixed_anchor;
    } else if (opt_.selector && in.t % opt_.decision_interval == 0) {
        VectorXd lg = opt_.selector->logits(in.obs, out.message);
        int idx = rng ? nn::categorical_sample(lg, *rng).index : nn::categorical_argmax(lg);
        anchor_ = high::anchor_from_index(idx);
    }
    out.anchor = anchor_;

    if (opt_.low) {
        const int slots = opt_.student_slots;
        VectorXd x = VectorXd::Zero(low::low_input_dim(slots, static_cast<int>(in.lidar.size())));
        x[0] = anchor_.x - in.pos.x;
        x[1] = anchor_.y - in.pos.y;
        const int nei_off = 3 * opt_.n_targets + 4;
        const int avail = static_cast<int>(in.obs.size()) - nei_off;
        const int take = std::min(avail, 4 * slots);
        for (int k = 0; k < take; ++k) x[2 + k] = in.obs[nei_off + k];
        std::vector<double> d = in.lidar;
        if (opt_.safe_lidar) d = low::safe_lidar_transform(d, opt_.lidar_cap);
        for (size_t m = 0; m < d.size(); ++m) x[2 + 4 * slots + m] = d[m];
        MatrixXd mu = opt_.low->mean_batch(x.transpose());
        Vec2 u{mu(0, 0), mu(0, 1)};
        if (rng) {
            VectorXd s = opt_.low->gaussian().sample(mu.row(0).transpose(), *rng);
            u = {s[0], s[1]};
        }
        out.accel = clamp_per_axis(u, opt_.accel_max);
    } else {
        out.accel = high::nav_only_action(anchor_, in.pos, in.vel, 1.0, 0.5, opt_.accel_max);
    }

    m_prev_ = out.message;
    return out;
}

LocalProvider::LocalProvider(const AgentCore::Options& opt, int n_agents, Rng* sample_rng)
    : rng_(sample_rng) {
    for (int i = 0; i < n_agents; ++i) cores_.emplace_back(opt);
}

void LocalProvider::start_episode() {
    for (auto& c : cores_) c.reset();
}

std::vector<AgentCore::Out> LocalProvider::act_all(const std::vector<AgentCore::In>& ins, int) {
    std::vector<AgentCore::Out> outs;
    outs.reserve(ins.size());
    for (size_t i = 0; i < ins.size(); ++i) outs.push_back(cores_[i].act(ins[i], rng_));
    return outs;
}

std::vector<AgentCore::In> build_agent_inputs(WorldState& world,
                                              const std::vector<std::vector<double>>& scans,
                                              const std::vector<VectorXd>& messages, int msg_dim) {
    const int n = world.n_agents();
    std::vector<AgentCore::In> ins(n);
    for (int i = 0; i < n; ++i) {
        auto obs = observe_vector(world, i);
        ins[i].obs = Eigen::Map<const VectorXd>(obs.data(), obs.size());
        ins[i].lidar = scans[i];
        auto xi = neighbor_set(world, i);
        ins[i].msgs.resize(xi.size(), msg_dim);
        ins[i].dists.resize(xi.size());
        for (size_t j = 0; j < xi.size(); ++j) {
            ins[i].msgs.row(j) = messages[xi[j]].transpose();
            ins[i].dists[j] = distance(world.agents[i].pos, world.agents[xi[j]].pos);
        }
        ins[i].pos = world.agents[i].pos;
        ins[i].vel = world.agents[i].vel;
        ins[i].t = world.t;
    }
    return ins;
}

Trajectory run_episode(const EpisodeOptions& opt, ActProvider& provider, uint64_t seed) {
    WorldState world = init_world(opt.cfg.env, seed);
    Trajectory traj;
    traj.cfg = opt.cfg.env;
    traj.obstacles = world.obstacles;
    for (const auto& t : world.targets) traj.targets.push_back(t.pos);

    std::vector<VectorXd> messages(world.n_agents(), VectorXd::Zero(opt.msg_dim));
    std::vector<std::vector<double>> scans;
    for (int i = 0; i < world.n_agents(); ++i) scans.push_back(lidar_scan(world, i));
    double prev_formation = 0.0;

    provider.start_episode();
    for (int t = 0; t < opt.cfg.env.episode_steps; ++t) {
        auto ins = build_agent_inputs(world, scans, messages, opt.msg_dim);
        auto outs = provider.act_all(ins, t);
        SWARM_REQUIRE(static_cast<int>(outs.size()) == world.n_agents(),
                      "provider returned wrong agent count");

        Vec2 adv_u = adv::adversary_action(opt.adversary, world, opt.adversary_policy, nullptr);

        TrajStep rec;
        rec.t = t;
        std::vector<Vec2> u(world.n_agents());
        for (int i = 0; i < world.n_agents(); ++i) u[i] = outs[i].accel;
        swarm::step(world, u, adv_u);

        for (int i = 0; i < world.n_agents(); ++i) {
            messages[i] = outs[i].message;
            TrajAgentStep a;
            a.pos = world.agents[i].pos;
            a.vel = world.agents[i].vel;
            a.accel = outs[i].accel;
            a.anchor = outs[i].anchor;
            rec.agents.push_back(a);
        }
        rec.has_adversary = world.has_adversary;
        if (world.has_adversary) {
            rec.adv_pos = world.adversary.pos;
            rec.adv_vel = world.adversary.vel;
            rec.adv_accel = adv_u;
        }

        scans.clear();
        for (int i = 0; i < world.n_agents(); ++i) scans.push_back(lidar_scan(world, i));

        Grouping g = partition_groups(world);
        RewardBreakdown b;
        b.formation = formation_reward(g, world, prev_formation, opt.cfg.constants, &b.group_errors);
        prev_formation = b.formation;
        if (!world.targets.empty()) {
            b.navigation = navigation_reward(world);
        } else if (opt.fixed_anchor) {
            b.navigation = navigation_reward_low(world, *opt.fixed_anchor);
        }
        std::vector<double> urg;
        for (const auto& tg : world.targets) urg.push_back(tg.urgency);
        if (!urg.empty()) {
            b.task = task_reward_and_decay(world, g, opt.cfg.constants, urg);
            for (size_t k = 0; k < urg.size(); ++k) world.targets[k].urgency = urg[k];
        }
        b.evasion = evasion_reward(world, opt.cfg.constants);
        std::vector<double> mins;
        for (const auto& s : scans) mins.push_back(*std::min_element(s.begin(), s.end()));
        b.collision = collision_reward(mins, opt.cfg.constants);
        rec.comps = b;
        rec.reward_low = total_reward(b, opt.cfg.weights, RewardMode::kLow);
        rec.reward_high = total_reward(b, opt.cfg.weights, RewardMode::kHigh);

        if (opt.record_messages) rec.messages = messages;
        traj.steps.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace swarm::harness
