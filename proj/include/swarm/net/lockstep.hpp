#pragma once

#include <string>

#include "swarm/harness/episode.hpp"
#include "swarm/net/packet.hpp"
#include "swarm/net/socket.hpp"

namespace swarm::net {

// Star topology: the host owns the world, range-filters every observation,
// and routes consensus messages between in-range peers. Agent i listens on
// base_port + 1 + i; the host on base_port. Lockstep barriers every step;
// async mode ticks the world at a fixed rate with zero-order hold on late
// actions.
struct DistributedOptions {
    Config cfg;
    int base_port = 47800;
    std::string agent_binary;                  // spawned once per agent
    std::vector<std::string> agent_extra_args; // forwarded verbatim
    adv::AdversaryKind adversary = adv::AdversaryKind::kNone;
    const low::LowPolicy* adversary_policy = nullptr;
    std::optional<Vec2> fixed_anchor;
    bool async_mode = false;
    int tick_ms = 50;            // async world period
    std::vector<int> delay_ms;   // per-agent artificial decision delay (async)
    int timeout_ms = 2000;       // lockstep reply timeout per attempt
    int max_retries = 50;
    int msg_dim = 64;
    bool inject_checksum_fault = false;  // corrupt one state packet at fault_step
    int fault_step = 3;
};

struct DistributedResult {
    harness::Trajectory trajectory;
    long dropped_packets = 0;  // checksum rejects observed at the host
    long resends = 0;
    std::vector<std::vector<int>> action_age_ticks;  // async: per agent per tick
};

DistributedResult run_distributed(const DistributedOptions& opt, uint64_t seed);

// Blocking agent-process loop; returns on shutdown. The stack options carry
// the loaded policy modules.
struct AgentProcOptions {
    int id = 0;
    int base_port = 47800;
    harness::AgentCore::Options stack;
    int delay_ms = 0;  // artificial decision latency (async experiments)
};
int agent_proc_main(const AgentProcOptions& opt);

}  // namespace swarm::net
