#include "swarm/lidar.hpp"

namespace swarm {

double ray_circle_hit(const Vec2& origin, const Vec2& dir, const Vec2& center, double radius) {
    Vec2 oc = origin - center;
    double c0 = oc.norm2() - radius * radius;
    if (c0 < 0.0) return 0.0;  // origin inside
    double b = dir.dot(oc);
    double disc = b * b - c0;
    if (disc < 0.0) return -1.0;
    double root = std::sqrt(disc);
    double t_near = -b - root;
    if (t_near > 0.0) return t_near;
    return -1.0;
}

namespace {

constexpr double kMinReading = 1e-6;

std::vector<double> scan_circles(const WorldState& w, const Vec2& origin,
                                 const std::vector<std::pair<Vec2, double>>& circles) {
    const int M = w.cfg.lidar_rays;
    std::vector<double> out(M, w.cfg.obs_range);
    for (int m = 0; m < M; ++m) {
        double ang = 2.0 * 3.14159265358979323846 * m / M;
        Vec2 dir{std::cos(ang), std::sin(ang)};
        double best = w.cfg.obs_range;
        for (const auto& [c, r] : circles) {
            double t = ray_circle_hit(origin, dir, c, r);
            if (t >= 0.0 && t < best) best = t;
        }
        out[m] = std::max(best, kMinReading);
    }
    return out;
}

void apply_sensing_noise(WorldState& w, std::vector<double>& readings) {
    if (w.cfg.sensing_std <= 0.0) return;
    for (double& d : readings) {
        d += w.rng.normal(0.0, w.cfg.sensing_std);
        d = std::min(std::max(d, kMinReading), w.cfg.obs_range);
    }
}

}  // namespace

std::vector<double> lidar_scan(WorldState& w, int agent_id) {
    SWARM_REQUIRE(agent_id >= 0 && agent_id < w.n_agents(), "lidar_scan: bad agent id");
    std::vector<std::pair<Vec2, double>> circles;
    for (const auto& o : w.obstacles) circles.emplace_back(o.center, o.radius);
    for (int j = 0; j < w.n_agents(); ++j)
        if (j != agent_id) circles.emplace_back(w.agents[j].pos, w.cfg.body_radius);
    auto out = scan_circles(w, w.agents[agent_id].pos, circles);
    apply_sensing_noise(w, out);
    return out;
}

std::vector<double> adversary_lidar(WorldState& w) {
    SWARM_REQUIRE(w.has_adversary, "adversary_lidar: world has no adversary");
    std::vector<std::pair<Vec2, double>> circles;
    for (const auto& o : w.obstacles) circles.emplace_back(o.center, o.radius);
    auto out = scan_circles(w, w.adversary.pos, circles);
    apply_sensing_noise(w, out);
    return out;
}

}  // namespace swarm
