#include "swarm/harness/metrics.hpp"

#include "swarm/formation.hpp"
#include "swarm/grouping.hpp"

namespace swarm::harness {

namespace {

// Rebuild a minimal world so the grouping rules apply verbatim.
WorldState world_at(const Trajectory& traj, const TrajStep& s) {
    WorldState w;
    w.cfg = traj.cfg;
    for (const auto& a : s.agents) w.agents.push_back({a.pos, a.vel});
    return w;
}

}  // namespace

MetricsRecord compute_metrics(const Trajectory& traj) {
    MetricsRecord m;
    m.episode_steps = static_cast<int>(traj.steps.size());
    m.dt = traj.cfg.dt;
    const RewardConstants rc;  // thresholds: formation_tol 1 m, safety 0.2 m, evasion 2 m

    long agent_steps = 0, close_agent_steps = 0;
    for (const auto& s : traj.steps) {
        WorldState w = world_at(traj, s);
        Grouping g = partition_groups(w);

        if (!g.components.empty()) {
            double worst = 0.0;
            for (const auto& comp : g.components) {
                std::vector<Vec2> rel;
                Vec2 mean{0, 0};
                for (int idx : comp) mean += w.agents[idx].pos;
                mean = mean / static_cast<double>(comp.size());
                for (int idx : comp) rel.push_back(w.agents[idx].pos - mean);
                worst = std::max(worst, directed_hausdorff(
                                            formation_template(static_cast<int>(comp.size())),
                                            rel));
            }
            if (worst < rc.formation_tol) ++m.f_steps;
        }

        // anchor proximity: shared anchor -> swarm centroid, otherwise mean
        // over agents of own-group centroid vs own anchor
        bool shared = true;
        for (size_t i = 1; i < s.agents.size(); ++i)
            if (!(s.agents[i].anchor == s.agents[0].anchor)) shared = false;
        std::vector<Vec2> group_centroid(s.agents.size());
        for (size_t i = 0; i < s.agents.size(); ++i) group_centroid[i] = s.agents[i].pos;
        for (const auto& comp : g.components) {
            Vec2 mean{0, 0};
            for (int idx : comp) mean += w.agents[idx].pos;
            mean = mean / static_cast<double>(comp.size());
            for (int idx : comp) group_centroid[idx] = mean;
        }
        if (shared) {
            Vec2 centroid{0, 0};
            for (const auto& a : s.agents) centroid += a.pos;
            centroid = centroid / static_cast<double>(s.agents.size());
            if (distance(centroid, s.agents[0].anchor) < 1.0) ++m.n_anchor_steps;
        } else {
            double mean_err = 0.0;
            for (size_t i = 0; i < s.agents.size(); ++i)
                mean_err += distance(group_centroid[i], s.agents[i].anchor);
            mean_err /= static_cast<double>(s.agents.size());
            if (mean_err < 1.0) ++m.n_anchor_steps;
        }

        bool target_hit = false;
        for (const auto& comp : g.components) {
            Vec2 mean{0, 0};
            for (int idx : comp) mean += w.agents[idx].pos;
            mean = mean / static_cast<double>(comp.size());
            for (const auto& tp : traj.targets)
                if (distance(mean, tp) < 1.0) target_hit = true;
        }
        if (target_hit) ++m.n_target_steps;

        for (const auto& a : s.agents) {
            ++agent_steps;
            for (const auto& o : traj.obstacles) {
                if (distance(a.pos, o.center) - o.radius < rc.safety_dist) {
                    ++close_agent_steps;
                    break;
                }
            }
        }

        if (s.has_adversary) {
            for (const auto& a : s.agents) {
                if (distance(a.pos, s.adv_pos) < rc.alert_evasion) {
                    ++m.e_steps;
                    break;
                }
            }
        }

        m.sum_formation += s.comps.formation;
        m.sum_navigation += s.comps.navigation;
        m.sum_task += s.comps.task;
        m.sum_evasion += s.comps.evasion;
        m.sum_collision += s.comps.collision;
        m.mean_reward_low += s.reward_low;
        m.mean_reward_high += s.reward_high;
    }
    if (agent_steps > 0)
        m.c_percent = 100.0 * static_cast<double>(close_agent_steps) /
                      static_cast<double>(agent_steps);
    if (!traj.steps.empty()) {
        m.mean_reward_low /= static_cast<double>(traj.steps.size());
        m.mean_reward_high /= static_cast<double>(traj.steps.size());
    }
    return m;
}

}  // namespace swarm::harness
