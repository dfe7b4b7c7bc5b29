#pragma once

#include <string>
#include <vector>

#include "swarm/harness/episode.hpp"
#include "swarm/harness/metrics.hpp"
#include "swarm/rl/ppo.hpp"

namespace swarm::harness {

// Output layout of one run: config.json snapshot, checkpoints/, logs and
// plots. All floats print with %.17g so identical runs produce identical
// bytes.
struct RunDir {
    std::string root;
    static RunDir create(const std::string& path);
    std::string file(const std::string& rel) const { return root + "/" + rel; }
    void ensure_subdir(const std::string& rel) const;
};

std::string format_double(double v);

// Line-delimited records: {"episode":..,"mean_reward":..,"formation":..,...}
void write_learning_curve(const std::string& path,
                          const std::vector<rl::LearnCurvePoint>& curve);

// Header line with obstacles/targets, then one record per step per agent
// (t, id, position, velocity, acceleration, anchor, reward components);
// the adversary logs as id -1.
void write_trajectory(const std::string& path, const Trajectory& traj);

// Delimiter-separated metrics, one row per episode plus a mean row.
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records);

// Per step per agent: step, agent id, 64 message floats.
void write_message_log(const std::string& path, const Trajectory& traj);

}  // namespace swarm::harness
