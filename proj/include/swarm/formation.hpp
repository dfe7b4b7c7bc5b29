#pragma once

#include <vector>

#include "swarm/common.hpp"

namespace swarm {

// Desired shape for a group of c agents: a regular c-gon of circumradius 1 m,
// first vertex at angle pi/2, re-centered so the centroid is exactly the
// origin. Valid c: [kPatternMin, kPatternMax].
std::vector<Vec2> formation_template(int c);

}  // namespace swarm
