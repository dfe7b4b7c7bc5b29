#include "swarm/grouping.hpp"

#include <algorithm>

namespace swarm {

Grouping partition_groups(const WorldState& w) {
    const int n = w.n_agents();
    std::vector<int> comp(n, -1);
    int n_comp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] != -1) continue;
        // BFS from lowest unvisited index; component ids follow member order.
        std::vector<int> stack{i};
        comp[i] = n_comp;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            for (int b = 0; b < n; ++b) {
                if (comp[b] != -1) continue;
                if (distance(w.agents[a].pos, w.agents[b].pos) < w.cfg.obs_range) {
                    comp[b] = n_comp;
                    stack.push_back(b);
                }
            }
        }
        ++n_comp;
    }

    std::vector<std::vector<int>> raw(n_comp);
    for (int i = 0; i < n; ++i) raw[comp[i]].push_back(i);

    Grouping g;
    for (auto& members : raw) {
        std::sort(members.begin(), members.end());
        int s = static_cast<int>(members.size());
        if (s < kPatternMin) {
            g.isolated.insert(g.isolated.end(), members.begin(), members.end());
        } else if (s <= kPatternMax) {
            g.components.push_back(members);
        } else {
            // Keep the pattern_max members nearest the centroid; ties by index.
            Vec2 centroid{0, 0};
            for (int m : members) centroid += w.agents[m].pos;
            centroid = centroid / static_cast<double>(s);
            std::vector<std::pair<double, int>> byDist;
            for (int m : members) byDist.emplace_back(distance(w.agents[m].pos, centroid), m);
            std::sort(byDist.begin(), byDist.end());
            std::vector<int> kept;
            for (int k = 0; k < kPatternMax; ++k) kept.push_back(byDist[k].second);
            std::sort(kept.begin(), kept.end());
            g.components.push_back(kept);
            for (int k = kPatternMax; k < s; ++k) g.isolated.push_back(byDist[k].second);
        }
    }
    std::sort(g.isolated.begin(), g.isolated.end());
    return g;
}

}  // namespace swarm
