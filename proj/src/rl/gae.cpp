#include "swarm/rl/gae.hpp"

#include "swarm/common.hpp"

namespace swarm::rl {

GaeResult compute_gae(const VectorXd& rewards, const VectorXd& values,
                      const std::vector<uint8_t>& dones, double gamma, double lambda) {
    const long T = rewards.size();
    SWARM_REQUIRE(values.size() == T + 1, "compute_gae: need T+1 values (bootstrap included)");
    SWARM_REQUIRE(static_cast<long>(dones.size()) == T, "compute_gae: dones length");

    GaeResult out;
    out.advantages.resize(T);
    double gae = 0.0;
    for (long t = T - 1; t >= 0; --t) {
        double not_done = dones[t] ? 0.0 : 1.0;
        double delta = rewards[t] + gamma * values[t + 1] * not_done - values[t];
        gae = delta + gamma * lambda * not_done * gae;
        out.advantages[t] = gae;
    }
    out.returns = out.advantages + values.head(T);
    return out;
}

}  // namespace swarm::rl
