#include "swarm/observation.hpp"

#include <algorithm>

#include "swarm/lidar.hpp"

namespace swarm {

std::vector<int> neighbor_set(const WorldState& w, int agent_id) {
    SWARM_REQUIRE(agent_id >= 0 && agent_id < w.n_agents(), "neighbor_set: bad agent id");
    std::vector<std::pair<double, int>> near;
    const Vec2 p = w.agents[agent_id].pos;
    for (int j = 0; j < w.n_agents(); ++j) {
        if (j == agent_id) continue;
        double d = distance(p, w.agents[j].pos);
        if (d < w.cfg.obs_range) near.emplace_back(d, j);
    }
    std::sort(near.begin(), near.end());
    std::vector<int> out;
    out.reserve(near.size());
    for (const auto& [d, j] : near) out.push_back(j);
    return out;
}

std::vector<double> observe_vector(const WorldState& w, int agent_id) {
    const EnvConfig& cfg = w.cfg;
    const AgentBody& self = w.agents[agent_id];
    std::vector<double> o;
    o.reserve(observation_width(cfg));

    for (const auto& t : w.targets) {
        o.push_back(t.pos.x - self.pos.x);
        o.push_back(t.pos.y - self.pos.y);
        o.push_back(t.urgency);
    }
    // Adversary slots are always present; zero when absent.
    if (w.has_adversary) {
        o.push_back(w.adversary.pos.x - self.pos.x);
        o.push_back(w.adversary.pos.y - self.pos.y);
        o.push_back(w.adversary.vel.x - self.vel.x);
        o.push_back(w.adversary.vel.y - self.vel.y);
    } else {
        o.insert(o.end(), 4, 0.0);
    }
    auto xi = neighbor_set(w, agent_id);
    for (int j : xi) {
        o.push_back(w.agents[j].pos.x - self.pos.x);
        o.push_back(w.agents[j].pos.y - self.pos.y);
        o.push_back(w.agents[j].vel.x - self.vel.x);
        o.push_back(w.agents[j].vel.y - self.vel.y);
    }
    o.resize(observation_width(cfg), 0.0);
    return o;
}

LocalState observe(WorldState& w, int agent_id, const std::vector<InboxMessage>& inbox) {
    LocalState z;
    z.obs = observe_vector(w, agent_id);
    z.lidar = lidar_scan(w, agent_id);

    auto xi = neighbor_set(w, agent_id);
    for (const auto& m : inbox) {
        auto it = std::find(xi.begin(), xi.end(), m.sender);
        if (it == xi.end()) {
            ++z.dropped_messages;
            continue;
        }
        z.messages.push_back(m);
    }
    // xi order: ascending distance, then index.
    std::sort(z.messages.begin(), z.messages.end(), [&](const InboxMessage& a, const InboxMessage& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.sender < b.sender;
    });
    return z;
}

}  // namespace swarm
