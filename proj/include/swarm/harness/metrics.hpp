#pragma once

#include "swarm/harness/episode.hpp"

namespace swarm::harness {

// Episode scores, all recomputed from the trajectory alone:
//   F: steps whose worst per-group formation error is under 1 m,
//   N (anchor): steps with the swarm/group centroid within 1 m of the anchor,
//   N (target): steps with any group centroid within 1 m of a target,
//   C: percent of agent-steps within the safety distance of an obstacle
//      surface,
//   E: steps with any agent closer than 2 m to the adversary.
struct MetricsRecord {
    int episode_steps = 0;
    double dt = 0.0;
    int f_steps = 0;
    int n_anchor_steps = 0;
    int n_target_steps = 0;
    double c_percent = 0.0;
    int e_steps = 0;
    double sum_formation = 0.0, sum_navigation = 0.0, sum_task = 0.0, sum_evasion = 0.0,
           sum_collision = 0.0;
    double mean_reward_low = 0.0, mean_reward_high = 0.0;

    double f_seconds() const { return f_steps * dt; }
    double n_anchor_seconds() const { return n_anchor_steps * dt; }
    double n_target_seconds() const { return n_target_steps * dt; }
    double e_seconds() const { return e_steps * dt; }
};

MetricsRecord compute_metrics(const Trajectory& traj);

}  // namespace swarm::harness
