#pragma once

#include <vector>

#include "swarm/world.hpp"

namespace swarm {

// One received consensus message: 64 latent floats plus sender distance.
struct InboxMessage {
    int sender = -1;
    double distance = 0.0;
    std::vector<double> payload;
};

// Per-agent Dec-POMDP input. `obs` is the flattened [targets | adversary |
// neighbors] block of constant width 3*|T| + 4 + 4*(N-1); unused neighbor
// slots are exactly zero. `lidar` holds M readings in (0, obs_range].
struct LocalState {
    std::vector<double> obs;
    std::vector<double> lidar;
    std::vector<InboxMessage> messages;  // xi-ordered, senders in range only
    int dropped_messages = 0;            // inbox entries rejected as out of range
};

inline int observation_width(const EnvConfig& cfg) {
    return 3 * cfg.n_targets + 4 + 4 * (cfg.n_agents - 1);
}

// Agents strictly closer than obs_range, ascending by distance, ties broken
// by index. Symmetric: j in xi_i iff i in xi_j.
std::vector<int> neighbor_set(const WorldState& world, int agent_id);

// Builds the local state; messages whose sender is not in xi_i are dropped
// and counted. The lidar scan is taken here (consumes world RNG when sensing
// noise is on).
LocalState observe(WorldState& world, int agent_id, const std::vector<InboxMessage>& inbox);

// Observation block only (no lidar/messages); const and RNG-free.
std::vector<double> observe_vector(const WorldState& world, int agent_id);

}  // namespace swarm
