#include "swarm/harness/rundir.hpp"

#include <sys/stat.h>

#include <cstdio>
#include <fstream>

namespace swarm::harness {

namespace {
void mkdir_p(const std::string& path) {
    std::string acc;
    for (size_t i = 0; i < path.size(); ++i) {
        acc += path[i];
        if (path[i] == '/' || i + 1 == path.size()) {
            if (acc == "/" || acc.empty()) continue;
            ::mkdir(acc.c_str(), 0755);
        }
    }
}
}  // namespace

RunDir RunDir::create(const std::string& path) {
    mkdir_p(path);
    RunDir rd{path};
    return rd;
}

void RunDir::ensure_subdir(const std::string& rel) const { mkdir_p(root + "/" + rel); }

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_learning_curve(const std::string& path,
                          const std::vector<rl::LearnCurvePoint>& curve) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path);
    for (const auto& p : curve) {
        out << "{\"episode\":" << p.episode << ",\"mean_reward\":"
            << format_double(p.mean_reward)
            << ",\"formation\":" << format_double(p.mean_components.formation)
            << ",\"navigation\":" << format_double(p.mean_components.navigation)
            << ",\"task\":" << format_double(p.mean_components.task)
            << ",\"evasion\":" << format_double(p.mean_components.evasion)
            << ",\"collision\":" << format_double(p.mean_components.collision) << "}\n";
    }
}

namespace {
void write_vec(std::ofstream& out, const char* x, const char* y, const Vec2& v) {
    out << ",\"" << x << "\":" << format_double(v.x) << ",\"" << y << "\":" << format_double(v.y);
}
}  // namespace

void write_trajectory(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path);
    out << "{\"type\":\"header\",\"n_agents\":" << traj.cfg.n_agents
        << ",\"dt\":" << format_double(traj.cfg.dt) << ",\"obstacles\":[";
    for (size_t i = 0; i < traj.obstacles.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_double(traj.obstacles[i].center.x) << ","
            << format_double(traj.obstacles[i].center.y) << ","
            << format_double(traj.obstacles[i].radius) << "]";
    }
    out << "],\"targets\":[";
    for (size_t i = 0; i < traj.targets.size(); ++i) {
        if (i) out << ",";
        out << "[" << format_double(traj.targets[i].x) << "," << format_double(traj.targets[i].y)
            << "]";
    }
    out << "]}\n";

    for (const auto& s : traj.steps) {
        for (size_t i = 0; i < s.agents.size(); ++i) {
            const auto& a = s.agents[i];
            out << "{\"t\":" << s.t << ",\"id\":" << i;
            write_vec(out, "px", "py", a.pos);
            write_vec(out, "vx", "vy", a.vel);
            write_vec(out, "ux", "uy", a.accel);
            write_vec(out, "ax", "ay", a.anchor);
            out << ",\"rf\":" << format_double(s.comps.formation)
                << ",\"rn\":" << format_double(s.comps.navigation)
                << ",\"rt\":" << format_double(s.comps.task)
                << ",\"re\":" << format_double(s.comps.evasion)
                << ",\"rc\":" << format_double(s.comps.collision) << "}\n";
        }
        if (s.has_adversary) {
            out << "{\"t\":" << s.t << ",\"id\":-1";
            write_vec(out, "px", "py", s.adv_pos);
            write_vec(out, "vx", "vy", s.adv_vel);
            write_vec(out, "ux", "uy", s.adv_accel);
            out << "}\n";
        }
    }
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path);
    out << "episode,steps,F_steps,F_seconds,N_anchor_steps,N_anchor_seconds,N_target_steps,"
           "N_target_seconds,C_percent,E_steps,E_seconds,sum_Rf,sum_Rn,sum_Rt,sum_Re,sum_Rc,"
           "mean_R_low,mean_R_high\n";
    MetricsRecord mean;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << i << "," << r.episode_steps << "," << r.f_steps << ","
            << format_double(r.f_seconds()) << "," << r.n_anchor_steps << ","
            << format_double(r.n_anchor_seconds()) << "," << r.n_target_steps << ","
            << format_double(r.n_target_seconds()) << "," << format_double(r.c_percent) << ","
            << r.e_steps << "," << format_double(r.e_seconds()) << ","
            << format_double(r.sum_formation) << "," << format_double(r.sum_navigation) << ","
            << format_double(r.sum_task) << "," << format_double(r.sum_evasion) << ","
            << format_double(r.sum_collision) << "," << format_double(r.mean_reward_low) << ","
            << format_double(r.mean_reward_high) << "\n";
        mean.episode_steps += r.episode_steps;
        mean.dt = r.dt;
        mean.f_steps += r.f_steps;
        mean.n_anchor_steps += r.n_anchor_steps;
        mean.n_target_steps += r.n_target_steps;
        mean.c_percent += r.c_percent;
        mean.e_steps += r.e_steps;
        mean.sum_formation += r.sum_formation;
        mean.sum_navigation += r.sum_navigation;
        mean.sum_task += r.sum_task;
        mean.sum_evasion += r.sum_evasion;
        mean.sum_collision += r.sum_collision;
        mean.mean_reward_low += r.mean_reward_low;
        mean.mean_reward_high += r.mean_reward_high;
    }
    if (!records.empty()) {
        double n = static_cast<double>(records.size());
        out << "mean," << format_double(mean.episode_steps / n) << ","
            << format_double(mean.f_steps / n) << "," << format_double(mean.f_steps / n * mean.dt)
            << "," << format_double(mean.n_anchor_steps / n) << ","
            << format_double(mean.n_anchor_steps / n * mean.dt) << ","
            << format_double(mean.n_target_steps / n) << ","
            << format_double(mean.n_target_steps / n * mean.dt) << ","
            << format_double(mean.c_percent / n) << "," << format_double(mean.e_steps / n) << ","
            << format_double(mean.e_steps / n * mean.dt) << ","
            << format_double(mean.sum_formation / n) << ","
            << format_double(mean.sum_navigation / n) << "," << format_double(mean.sum_task / n)
            << "," << format_double(mean.sum_evasion / n) << ","
            << format_double(mean.sum_collision / n) << ","
            << format_double(mean.mean_reward_low / n) << ","
            << format_double(mean.mean_reward_high / n) << "\n";
    }
}

void write_message_log(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw ContractError("cannot write " + path);
    for (const auto& s : traj.steps) {
        for (size_t i = 0; i < s.messages.size(); ++i) {
            out << s.t << " " << i;
            for (long k = 0; k < s.messages[i].size(); ++k)
                out << " " << format_double(s.messages[i][k]);
            out << "\n";
        }
    }
}

}  // namespace swarm::harness
