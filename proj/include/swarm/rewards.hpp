#pragma once

#include <vector>

#include "swarm/config.hpp"
#include "swarm/grouping.hpp"
#include "swarm/world.hpp"

namespace swarm {

enum class RewardMode { kFull, kLow, kHigh };

// Per-step reward components plus the state the lag term carries across steps.
struct RewardBreakdown {
    double formation = 0.0;
    double navigation = 0.0;
    double task = 0.0;
    double evasion = 0.0;
    double collision = 0.0;
    std::vector<double> group_errors;  // directed HD per group, component order
};

// Directed max-min distance: max over a of min over b of |a-b|.
// No symmetrization, no alignment. Both sets must be non-empty.
double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// Eq-style formation term: -(sum of per-group template errors) - lag*prev.
// Group positions are centered on the group mean before comparison; isolated
// agents contribute nothing. prev starts at 0.
double formation_reward(const Grouping& g, const WorldState& w, double prev_formation,
                        const RewardConstants& rc, std::vector<double>* group_errors = nullptr);

// Urgency-weighted distance sum over all agent/target pairs (negated).
double navigation_reward(const WorldState& w);
// Low-level variant: negative distance from the agent centroid to the anchor.
double navigation_reward_low(const WorldState& w, const Vec2& anchor);

// Awards each in-formation group inside a target radius its member count,
// urgency-weighted, then decays the target urgencies in place on `urgencies`.
double task_reward_and_decay(const WorldState& w, const Grouping& g, const RewardConstants& rc,
                             std::vector<double>& urgencies);

double evasion_reward(const WorldState& w, const RewardConstants& rc);

// Penalty from each agent's minimum lidar reading; boundary readings take the
// lower-penalty branch.
double collision_penalty_from_min(double d_min, const RewardConstants& rc);
double collision_reward(const std::vector<double>& lidar_min_per_agent, const RewardConstants& rc);

double total_reward(const RewardBreakdown& b, const RewardWeights& w, RewardMode mode);

}  // namespace swarm
