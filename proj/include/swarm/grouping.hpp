#pragma once

#include <vector>

#include "swarm/world.hpp"

namespace swarm {

// Connected components of the proximity graph (edge iff distance < obs_range),
// mapped onto formation patterns. Components below the smallest pattern size
// dissolve into isolated agents; oversize components keep the pattern_max
// members nearest the component centroid and isolate the rest.
struct Grouping {
    std::vector<std::vector<int>> components;  // members ascending; each size in [min,max] pattern
    std::vector<int> isolated;                 // ascending
};

constexpr int kPatternMin = 3;
constexpr int kPatternMax = 8;

Grouping partition_groups(const WorldState& world);

}  // namespace swarm
