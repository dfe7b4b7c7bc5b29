#include "swarm/net/lockstep.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <csignal>
#include <iostream>
#include <map>
#include <thread>

namespace swarm::net {

namespace {

using harness::AgentCore;

constexpr uint32_t kReadyStep = 0xFFFFFFFEu;

uint16_t agent_port(int base, int id) { return static_cast<uint16_t>(base + 1 + id); }

std::vector<WirePacket> build_bundle(const AgentCore::In& in, int t) {
    std::vector<WirePacket> out;
    // payload: obs_n, lidar_n, obs..., lidar..., px, py, vx, vy, inbox count
    WirePacket state;
    state.kind = PacketKind::kState;
    state.sender = kHostSender;
    state.step = static_cast<uint32_t>(t);
    state.payload.reserve(in.obs.size() + in.lidar.size() + 7);
    state.payload.push_back(static_cast<double>(in.obs.size()));
    state.payload.push_back(static_cast<double>(in.lidar.size()));
    for (long k = 0; k < in.obs.size(); ++k) state.payload.push_back(in.obs[k]);
    for (double d : in.lidar) state.payload.push_back(d);
    state.payload.push_back(in.pos.x);
    state.payload.push_back(in.pos.y);
    state.payload.push_back(in.vel.x);
    state.payload.push_back(in.vel.y);
    state.payload.push_back(static_cast<double>(in.msgs.rows()));
    out.push_back(std::move(state));

    for (long j = 0; j < in.msgs.rows(); ++j) {
        WirePacket msg;
        msg.kind = PacketKind::kConsensus;
        msg.sender = kHostSender;  // routed; origin folded into payload slot 0 sign convention
        msg.step = static_cast<uint32_t>(t);
        msg.payload.reserve(in.msgs.cols() + 1);
        msg.payload.push_back(in.dists[j]);
        for (long k = 0; k < in.msgs.cols(); ++k) msg.payload.push_back(in.msgs(j, k));
        out.push_back(std::move(msg));
    }

    WirePacket barrier;
    barrier.kind = PacketKind::kBarrier;
    barrier.sender = kHostSender;
    barrier.step = static_cast<uint32_t>(t);
    barrier.payload.push_back(static_cast<double>(in.msgs.rows()));
    out.push_back(std::move(barrier));
    return out;
}

// Host-side provider speaking the wire protocol.
class WireProvider : public harness::ActProvider {
 public:
    WireProvider(const DistributedOptions& opt, UdpSocket& sock, DistributedResult& result)
        : opt_(opt), sock_(sock), result_(result), n_(opt.cfg.env.n_agents) {
        last_out_.resize(n_);
        for (auto& o : last_out_) {
            o.accel = {0, 0};
            o.message = nn::VectorXd::Zero(opt_.msg_dim);
            o.anchor = {0, 0};
        }
        pending_step_.assign(n_, -1);
    }

    std::vector<AgentCore::Out> act_all(const std::vector<AgentCore::In>& ins, int t) override {
        return opt_.async_mode ? act_async(ins, t) : act_lockstep(ins, t);
    }

 private:
    void send_bundle(const std::vector<AgentCore::In>& ins, int t, int i, bool allow_fault) {
        auto pkts = build_bundle(ins[i], t);
        for (size_t p = 0; p < pkts.size(); ++p) {
            auto bytes = encode_packet(pkts[p]);
            if (allow_fault && opt_.inject_checksum_fault && t == opt_.fault_step && i == 0 &&
                p == 0 && !fault_done_) {
                bytes[17] ^= 0xFF;  // corrupt one payload byte; checksum now fails
                fault_done_ = true;
            }
            sock_.send_to(agent_port(opt_.base_port, i), bytes);
        }
    }

    // collect one packet into (msg, action) slots; true if it was a reply for step t
    bool absorb(const WirePacket& p, int t, std::vector<uint8_t>& have_msg,
                std::vector<uint8_t>& have_act) {
        if (p.sender >= n_) return false;
        const int i = p.sender;
        if (p.kind == PacketKind::kConsensus) {
            if (static_cast<int>(p.payload.size()) != opt_.msg_dim) return false;
            for (int k = 0; k < opt_.msg_dim; ++k) pending_out_[i].message[k] = p.payload[k];
            have_msg[i] = p.step == static_cast<uint32_t>(t);
            pending_step_[i] = static_cast<int>(p.step);
            return have_msg[i];
        }
        if (p.kind == PacketKind::kAction) {
            if (p.payload.size() != 4) return false;
            pending_out_[i].accel = {p.payload[0], p.payload[1]};
            pending_out_[i].anchor = {p.payload[2], p.payload[3]};
            have_act[i] = p.step == static_cast<uint32_t>(t);
            pending_step_[i] = static_cast<int>(p.step);
            return have_act[i];
        }
        return false;
    }

    std::vector<AgentCore::Out> act_lockstep(const std::vector<AgentCore::In>& ins, int t) {
        pending_out_ = last_out_;
        pending_step_.assign(n_, -1);
        std::vector<uint8_t> have_msg(n_, 0), have_act(n_, 0);
        for (int i = 0; i < n_; ++i) send_bundle(ins, t, i, true);

        int retries = 0;
        auto all_done = [&] {
            for (int i = 0; i < n_; ++i)
                if (!have_msg[i] || !have_act[i]) return false;
            return true;
        };
        auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(opt_.timeout_ms);
        while (!all_done()) {
            std::vector<uint8_t> raw;
            if (sock_.recv(raw, 20)) {
                WirePacket p;
                if (!decode_packet(raw.data(), raw.size(), p)) {
                    ++result_.dropped_packets;
                    continue;
                }
                absorb(p, t, have_msg, have_act);
                continue;
            }
            if (std::chrono::steady_clock::now() < deadline) continue;
            ++retries;
            if (retries > opt_.max_retries) {
                for (int i = 0; i < n_; ++i)
                    if (!have_msg[i] || !have_act[i])
                        throw ContractError("lockstep: agent " + std::to_string(i) +
                                            " stalled at step " + std::to_string(t));
            }
            ++result_.resends;
            for (int i = 0; i < n_; ++i)
                if (!have_msg[i] || !have_act[i]) send_bundle(ins, t, i, false);
            deadline = std::chrono::steady_clock::now() +
                       std::chrono::milliseconds(opt_.timeout_ms);
        }
        last_out_ = pending_out_;
        return last_out_;
    }

    std::vector<AgentCore::Out> act_async(const std::vector<AgentCore::In>& ins, int t) {
        pending_out_ = last_out_;
        if (pending_step_.empty()) pending_step_.assign(n_, -1);
        std::vector<uint8_t> have_msg(n_, 0), have_act(n_, 0);
        WirePacket tick;
        tick.kind = PacketKind::kWorldTick;
        tick.step = static_cast<uint32_t>(t);
        auto tick_bytes = encode_packet(tick);
        for (int i = 0; i < n_; ++i) {
            sock_.send_to(agent_port(opt_.base_port, i), tick_bytes);
            send_bundle(ins, t, i, false);
        }
        auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(opt_.tick_ms);
        while (std::chrono::steady_clock::now() < deadline) {
            bool complete = true;
            for (int i = 0; i < n_; ++i)
                if (!have_msg[i] || !have_act[i]) complete = false;
            if (complete) break;
            std::vector<uint8_t> raw;
            if (!sock_.recv(raw, 2)) continue;
            WirePacket p;
            if (!decode_packet(raw.data(), raw.size(), p)) {
                ++result_.dropped_packets;
                continue;
            }
            absorb(p, t, have_msg, have_act);  // stale replies still update pending_out_
        }
        last_out_ = pending_out_;
        result_.action_age_ticks.resize(n_);
        for (int i = 0; i < n_; ++i) {
            int age = pending_step_[i] >= 0 ? t - pending_step_[i] : t + 1;
            result_.action_age_ticks[i].push_back(age);
        }
        return last_out_;
    }

    const DistributedOptions& opt_;
    UdpSocket& sock_;
    DistributedResult& result_;
    int n_;
    bool fault_done_ = false;
    std::vector<AgentCore::Out> last_out_, pending_out_;
    std::vector<int> pending_step_;
};

class ChildProcs {
 public:
    ~ChildProcs() {
        for (pid_t pid : pids_) {
            int status;
            if (waitpid(pid, &status, WNOHANG) == 0) {
                kill(pid, SIGKILL);
                waitpid(pid, &status, 0);
            }
        }
    }
    void spawn(const std::string& binary, const std::vector<std::string>& args) {
        std::vector<char*> argv;
        argv.push_back(const_cast<char*>(binary.c_str()));
        for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        pid_t pid = fork();
        if (pid == 0) {
            execv(binary.c_str(), argv.data());
            _exit(127);
        }
        if (pid < 0) throw ContractError("fork failed");
        pids_.push_back(pid);
    }
    void reap_after_shutdown() {
        for (pid_t pid : pids_) {
            int status;
            waitpid(pid, &status, 0);
        }
        pids_.clear();
    }

 private:
    std::vector<pid_t> pids_;
};

}  // namespace

DistributedResult run_distributed(const DistributedOptions& opt, uint64_t seed) {
    const int n = opt.cfg.env.n_agents;
    UdpSocket host;
    host.bind(static_cast<uint16_t>(opt.base_port));

    ChildProcs children;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> args{"agent-proc",
                                      "--id",
                                      std::to_string(i),
                                      "--base-port",
                                      std::to_string(opt.base_port)};
        if (opt.async_mode && i < static_cast<int>(opt.delay_ms.size()) && opt.delay_ms[i] > 0) {
            args.push_back("--delay-ms");
            args.push_back(std::to_string(opt.delay_ms[i]));
        }
        for (const auto& a : opt.agent_extra_args) args.push_back(a);
        children.spawn(opt.agent_binary, args);
    }

    // wait for every agent's ready barrier
    {
        std::vector<uint8_t> ready(n, 0);
        int outstanding = n;
        auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(20);
        while (outstanding > 0) {
            if (std::chrono::steady_clock::now() > deadline)
                throw ContractError("distributed: agents failed to report ready");
            std::vector<uint8_t> raw;
            if (!host.recv(raw, 100)) continue;
            WirePacket p;
            if (!decode_packet(raw.data(), raw.size(), p)) continue;
            if (p.kind == PacketKind::kBarrier && p.step == kReadyStep && p.sender < n &&
                !ready[p.sender]) {
                ready[p.sender] = 1;
                --outstanding;
            }
        }
    }

    DistributedResult result;
    WireProvider provider(opt, host, result);

    harness::EpisodeOptions ep;
    ep.cfg = opt.cfg;
    ep.adversary = opt.adversary;
    ep.adversary_policy = opt.adversary_policy;
    ep.fixed_anchor = opt.fixed_anchor;
    ep.msg_dim = opt.msg_dim;
    result.trajectory = harness::run_episode(ep, provider, seed);

    WirePacket bye;
    bye.kind = PacketKind::kShutdown;
    auto bye_bytes = encode_packet(bye);
    for (int i = 0; i < n; ++i) host.send_to(agent_port(opt.base_port, i), bye_bytes);
    children.reap_after_shutdown();
    return result;
}

int agent_proc_main(const AgentProcOptions& opt) {
    UdpSocket sock;
    sock.bind(agent_port(opt.base_port, opt.id));
    harness::AgentCore core(opt.stack);

    WirePacket ready;
    ready.kind = PacketKind::kBarrier;
    ready.sender = static_cast<uint8_t>(opt.id);
    ready.step = kReadyStep;
    sock.send_to(static_cast<uint16_t>(opt.base_port), encode_packet(ready));

    struct Bundle {
        bool has_state = false;
        int expected_msgs = -1;
        AgentCore::In in;
        std::vector<std::pair<double, std::vector<double>>> msgs;
        bool barried = false;
        bool complete() const {
            return has_state && barried && static_cast<int>(msgs.size()) == expected_msgs;
        }
    };
    std::map<uint32_t, Bundle> pending;
    int last_acted = -1;
    std::vector<uint8_t> cached_msg_reply, cached_act_reply;

    auto act_on = [&](uint32_t step, Bundle& b) {
        const int md = opt.stack.msg_dim;
        b.in.msgs.resize(b.msgs.size(), md);
        b.in.dists.resize(b.msgs.size());
        for (size_t j = 0; j < b.msgs.size(); ++j) {
            b.in.dists[j] = b.msgs[j].first;
            for (int k = 0; k < md; ++k) b.in.msgs(j, k) = b.msgs[j].second[k];
        }
        b.in.t = static_cast<int>(step);
        if (opt.delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(opt.delay_ms));
        AgentCore::Out out = core.act(b.in, nullptr);

        WirePacket msg;
        msg.kind = PacketKind::kConsensus;
        msg.sender = static_cast<uint8_t>(opt.id);
        msg.step = step;
        msg.payload.assign(out.message.data(), out.message.data() + out.message.size());
        WirePacket act;
        act.kind = PacketKind::kAction;
        act.sender = static_cast<uint8_t>(opt.id);
        act.step = step;
        act.payload = {out.accel.x, out.accel.y, out.anchor.x, out.anchor.y};
        cached_msg_reply = encode_packet(msg);
        cached_act_reply = encode_packet(act);
        sock.send_to(static_cast<uint16_t>(opt.base_port), cached_msg_reply);
        sock.send_to(static_cast<uint16_t>(opt.base_port), cached_act_reply);
        last_acted = static_cast<int>(step);
    };

    while (true) {
        std::vector<uint8_t> raw;
        if (!sock.recv(raw, 30000)) return 2;  // orphaned: host gone
        WirePacket p;
        if (!decode_packet(raw.data(), raw.size(), p)) continue;  // corrupt: host will resend

        switch (p.kind) {
            case PacketKind::kShutdown:
                return 0;
            case PacketKind::kWorldTick:
                break;  // informational
            case PacketKind::kState: {
                if (p.payload.size() < 7) break;
                const long obs_n = static_cast<long>(p.payload[0]);
                const long lidar_n = static_cast<long>(p.payload[1]);
                if (static_cast<long>(p.payload.size()) != 2 + obs_n + lidar_n + 5) break;
                Bundle& b = pending[p.step];
                b.in.obs.resize(obs_n);
                for (long k = 0; k < obs_n; ++k) b.in.obs[k] = p.payload[2 + k];
                b.in.lidar.assign(p.payload.begin() + 2 + obs_n,
                                  p.payload.begin() + 2 + obs_n + lidar_n);
                const long base = 2 + obs_n + lidar_n;
                b.in.pos = {p.payload[base], p.payload[base + 1]};
                b.in.vel = {p.payload[base + 2], p.payload[base + 3]};
                b.expected_msgs = static_cast<int>(p.payload[base + 4]);
                b.has_state = true;
                break;
            }
            case PacketKind::kConsensus: {
                Bundle& b = pending[p.step];
                if (p.payload.empty()) break;
                std::vector<double> m(p.payload.begin() + 1, p.payload.end());
                b.msgs.emplace_back(p.payload[0], std::move(m));
                break;
            }
            case PacketKind::kBarrier: {
                pending[p.step].barried = true;
                break;
            }
            case PacketKind::kAction:
                break;
        }

        // act on the newest complete bundle; duplicate of the acted step means
        // the host lost our reply
        int newest = -1;
        for (const auto& [step, b] : pending)
            if (b.complete()) newest = std::max(newest, static_cast<int>(step));
        if (newest >= 0) {
            if (newest == last_acted) {
                sock.send_to(static_cast<uint16_t>(opt.base_port), cached_msg_reply);
                sock.send_to(static_cast<uint16_t>(opt.base_port), cached_act_reply);
                pending.erase(static_cast<uint32_t>(newest));
            } else if (newest > last_acted) {
                act_on(static_cast<uint32_t>(newest), pending[static_cast<uint32_t>(newest)]);
                // drop this and anything older
                for (auto it = pending.begin(); it != pending.end();)
                    it = (static_cast<int>(it->first) <= newest) ? pending.erase(it) : ++it;
            }
        }
    }
}

}  // namespace swarm::net
