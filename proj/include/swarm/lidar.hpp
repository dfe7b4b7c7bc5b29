#pragma once

#include <vector>

#include "swarm/world.hpp"

namespace swarm {

// Smallest positive ray parameter at which the ray origin+t*dir (|dir|=1)
// enters the circle, or a negative value when it never does. An origin
// already inside the circle reports 0.
double ray_circle_hit(const Vec2& origin, const Vec2& dir, const Vec2& center, double radius);

// Scan for one agent: ray m points at angle 2*pi*m/M; each reading is the
// distance to the nearest obstacle or other-agent body circle, capped at
// obs_range and floored just above zero. Sensing deviation, when enabled,
// adds zero-mean Gaussian noise and re-caps into (0, obs_range].
std::vector<double> lidar_scan(WorldState& world, int agent_id);

// Same geometry with only obstacle circles (used by the pursuer, whose
// collision penalty should not fire on the agents it hunts).
std::vector<double> adversary_lidar(WorldState& world);

}  // namespace swarm
