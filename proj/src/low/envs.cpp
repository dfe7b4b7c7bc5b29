#include "swarm/low/envs.hpp"

#include "swarm/grouping.hpp"

namespace swarm::low {

FormationEnv::FormationEnv(const LowEnvOptions& opt) : opt_(opt) {
    opt_.cfg.env.n_targets = 0;
    opt_.cfg.env.has_adversary = false;
    opt_.cfg.env.obstacle_density = opt.obstacle_density;
    reset(1);
}

void FormationEnv::reset(uint64_t episode_seed) {
    world_ = init_world(opt_.cfg.env, episode_seed);
    if (opt_.fixed_anchor) {
        anchor_ = *opt_.fixed_anchor;
    } else {
        double r = opt_.cfg.env.anchor_range;
        anchor_ = {world_.rng.uniform(-r, r), world_.rng.uniform(-r, r)};
    }
    prev_formation_ = 0.0;
    last_ = {};
    rescan();
}

void FormationEnv::rescan() {
    scans_.clear();
    for (int i = 0; i < world_.n_agents(); ++i) scans_.push_back(lidar_scan(world_, i));
}

nn::VectorXd FormationEnv::state() const {
    nn::VectorXd s(state_dim());
    int k = 0;
    for (const auto& a : world_.agents) {
        s[k++] = a.pos.x;
        s[k++] = a.pos.y;
        s[k++] = a.vel.x;
        s[k++] = a.vel.y;
    }
    s[k++] = anchor_.x;
    s[k++] = anchor_.y;
    return s;
}

nn::MatrixXd FormationEnv::observe_inputs() {
    const int n = world_.n_agents();
    const int M = opt_.cfg.env.lidar_rays;
    nn::MatrixXd x(n, input_dim());
    for (int i = 0; i < n; ++i) {
        auto obs = observe_vector(world_, i);
        int k = 0;
        x(i, k++) = anchor_.x - world_.agents[i].pos.x;
        x(i, k++) = anchor_.y - world_.agents[i].pos.y;
        // neighbor block sits beyond the (zeroed) target and adversary slots
        const int nei_off = 3 * opt_.cfg.env.n_targets + 4;
        for (int j = 0; j < 4 * (n - 1); ++j) x(i, k++) = obs[nei_off + j];
        for (int m = 0; m < M; ++m) x(i, k++) = scans_[i][m];
    }
    return x;
}

double FormationEnv::step(const nn::MatrixXd& actions) {
    std::vector<Vec2> u;
    for (int i = 0; i < world_.n_agents(); ++i) u.push_back({actions(i, 0), actions(i, 1)});
    swarm::step(world_, u, {0, 0});
    rescan();

    Grouping g = partition_groups(world_);
    RewardBreakdown b;
    b.formation = formation_reward(g, world_, prev_formation_, opt_.cfg.constants, &b.group_errors);
    prev_formation_ = b.formation;
    b.navigation = navigation_reward_low(world_, anchor_);
    std::vector<double> mins;
    for (const auto& scan : scans_) mins.push_back(*std::min_element(scan.begin(), scan.end()));
    b.collision = collision_reward(mins, opt_.cfg.constants);
    last_ = b;
    return total_reward(b, opt_.cfg.weights, RewardMode::kLow);
}

}  // namespace swarm::low
