#include "swarm/rewards.hpp"

#include <limits>

#include "swarm/formation.hpp"

namespace swarm {

double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    if (a.empty() || b.empty()) throw ContractError("directed_hausdorff: empty point set");
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) best = std::min(best, distance(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

namespace {

std::vector<Vec2> centered_positions(const WorldState& w, const std::vector<int>& members) {
    Vec2 mean{0, 0};
    for (int m : members) mean += w.agents[m].pos;
    mean = mean / static_cast<double>(members.size());
    std::vector<Vec2> out;
    out.reserve(members.size());
    for (int m : members) out.push_back(w.agents[m].pos - mean);
    return out;
}

}  // namespace

double formation_reward(const Grouping& g, const WorldState& w, double prev_formation,
                        const RewardConstants& rc, std::vector<double>* group_errors) {
    double err_sum = 0.0;
    if (group_errors) group_errors->clear();
    for (const auto& members : g.components) {
        auto tmpl = formation_template(static_cast<int>(members.size()));
        double e = directed_hausdorff(tmpl, centered_positions(w, members));
        err_sum += e;
        if (group_errors) group_errors->push_back(e);
    }
    return -err_sum - rc.lag * prev_formation;
}

double navigation_reward(const WorldState& w) {
    double sum = 0.0;
    for (const auto& a : w.agents)
        for (const auto& t : w.targets) sum += t.urgency * distance(a.pos, t.pos);
    return -sum;
}

double navigation_reward_low(const WorldState& w, const Vec2& anchor) {
    Vec2 mean{0, 0};
    for (const auto& a : w.agents) mean += a.pos;
    mean = mean / static_cast<double>(w.n_agents());
    return -distance(mean, anchor);
}

double task_reward_and_decay(const WorldState& w, const Grouping& g, const RewardConstants& rc,
                             std::vector<double>& urgencies) {
    SWARM_REQUIRE(urgencies.size() == w.targets.size(), "task_reward: urgency size mismatch");
    double total = 0.0;
    for (size_t ti = 0; ti < w.targets.size(); ++ti) {
        double tr_sum = 0.0;
        for (const auto& members : g.components) {
            auto tmpl = formation_template(static_cast<int>(members.size()));
            if (directed_hausdorff(tmpl, centered_positions(w, members)) >= rc.formation_tol)
                continue;
            Vec2 mean{0, 0};
            for (int m : members) mean += w.agents[m].pos;
            mean = mean / static_cast<double>(members.size());
            if (distance(mean, w.targets[ti].pos) < rc.task_radius)
                tr_sum += static_cast<double>(members.size());
        }
        total += urgencies[ti] * tr_sum;
        urgencies[ti] = std::max(urgencies[ti] - rc.decay * tr_sum, 0.0);
    }
    return total;
}

double evasion_reward(const WorldState& w, const RewardConstants& rc) {
    if (!w.has_adversary) return 0.0;
    double sum = 0.0;
    for (const auto& a : w.agents)
        sum += std::max(rc.alert_evasion - distance(a.pos, w.adversary.pos), 0.0);
    return -sum;
}

double collision_penalty_from_min(double d, const RewardConstants& rc) {
    if (d < rc.safety_dist) return rc.cr1 * (rc.safety_dist - d) + rc.c1;
    if (d < rc.alert_collision) return rc.cr2 * (rc.alert_collision - d) + rc.c2;
    return 0.0;
}

double collision_reward(const std::vector<double>& lidar_min_per_agent, const RewardConstants& rc) {
    double sum = 0.0;
    for (double d : lidar_min_per_agent) sum += collision_penalty_from_min(d, rc);
    return -sum;
}

double total_reward(const RewardBreakdown& b, const RewardWeights& w, RewardMode mode) {
    switch (mode) {
        case RewardMode::kLow:
            return w.w_f * b.formation + w.w_n * b.navigation + w.w_c * b.collision;
        case RewardMode::kHigh:
            return w.w_t * b.task + w.w_n_high * b.navigation + w.w_e * b.evasion;
        case RewardMode::kFull:
            return w.w_f * b.formation + w.w_n * b.navigation + w.w_t * b.task +
                   w.w_e * b.evasion + w.w_c * b.collision;
    }
    return 0.0;
}

}  // namespace swarm
