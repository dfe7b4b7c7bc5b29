#include "swarm/low/atm.hpp"

namespace swarm::low {

namespace {

std::unique_ptr<LowPolicy> fresh_policy(const AtmOptions& opt, const std::string& name,
                                        uint64_t seed) {
    Rng rng(Rng::derive(seed, std::hash<std::string>{}(name)));
    const int c = opt.cfg.env.n_agents;
    return std::make_unique<LowPolicy>(name, 2 + 4 * (c - 1), opt.cfg.env.lidar_rays, opt.hidden,
                                       rng);
}

rl::EnvFactory factory_for(const AtmOptions& opt, double density) {
    LowEnvOptions env_opt;
    env_opt.cfg = opt.cfg;
    env_opt.obstacle_density = density;
    return [env_opt](int) { return std::make_unique<FormationEnv>(env_opt); };
}

}  // namespace

AtmResult atm_train(
    const AtmOptions& opt, uint64_t seed,
    const std::function<void(const std::string&, const rl::LearnCurvePoint&)>& on_episode) {
    AtmResult out;
    const int state_dim = 4 * opt.cfg.env.n_agents + 2;

    out.policy_step1 = fresh_policy(opt, "low1", seed);
    rl::PpoTrainer t1(*out.policy_step1, state_dim, opt.cfg.train, Rng::derive(seed, 1));
    out.curve1 = t1.train(factory_for(opt, 0.0), opt.episodes1, [&](const rl::LearnCurvePoint& p) {
                    if (on_episode) on_episode("step1", p);
                }).curve;

    out.policy_step2 = fresh_policy(opt, "low2", seed + 1);
    rl::PpoTrainer t2(*out.policy_step2, state_dim, opt.cfg.train, Rng::derive(seed, 2));
    out.curve2 = t2.train(factory_for(opt, opt.obstacle_density), opt.episodes2,
                          [&](const rl::LearnCurvePoint& p) {
                              if (on_episode) on_episode("step2", p);
                          })
                     .curve;

    out.policy_final = fresh_policy(opt, "low", seed + 2);
    if (opt.skip_recombine) {
        out.policy_final->copy_from(*out.policy_step2);
    } else {
        out.policy_final->merge_from(*out.policy_step1, *out.policy_step2);
    }

    rl::PpoTrainer t3(*out.policy_final, state_dim, opt.cfg.train, Rng::derive(seed, 3));
    {
        // carry the step-2 value function into fine-tuning
        nn::ParamList dst, src;
        t3.critic().collect(dst);
        t2.critic().collect(src);
        for (size_t i = 0; i < dst.size(); ++i) dst[i]->w = src[i]->w;
        t3.normalizer() = t2.normalizer();
    }
    out.curve3 = t3.train(factory_for(opt, opt.obstacle_density), opt.episodes3,
                          [&](const rl::LearnCurvePoint& p) {
                              if (on_episode) on_episode("step3", p);
                          })
                     .curve;
    return out;
}

}  // namespace swarm::low
