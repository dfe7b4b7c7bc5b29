#include <doctest.h>

#include "swarm/low/envs.hpp"
#include "swarm/rl/gae.hpp"
#include "swarm/rl/ppo.hpp"
#include "swarm/rl/value_norm.hpp"

using namespace swarm;
using namespace swarm::rl;

TEST_CASE("gae hand-checked recursion") {
    VectorXd rewards(2), values(3);
    rewards << 1.0, 1.0;
    values << 0.5, 0.5, 0.0;
    auto out = compute_gae(rewards, values, {0, 1}, 0.8, 0.95);
    CHECK(out.advantages[1] == doctest::Approx(0.5));
    CHECK(out.advantages[0] == doctest::Approx(0.9 + 0.8 * 0.95 * 0.5));
    CHECK(out.returns[0] == doctest::Approx(out.advantages[0] + 0.5));
}

TEST_CASE("gae lambda zero reduces to one-step TD") {
    Rng rng(3);
    const int T = 16;
    VectorXd rewards(T), values(T + 1);
    for (int t = 0; t <= T; ++t) values[t] = rng.normal();
    for (int t = 0; t < T; ++t) rewards[t] = rng.normal();
    std::vector<uint8_t> dones(T, 0);
    dones[T - 1] = 1;
    auto out = compute_gae(rewards, values, dones, 0.8, 0.0);
    for (int t = 0; t < T - 1; ++t)
        CHECK(out.advantages[t] ==
              doctest::Approx(rewards[t] + 0.8 * values[t + 1] - values[t]).epsilon(1e-12));
    CHECK(out.advantages[T - 1] == doctest::Approx(rewards[T - 1] - values[T - 1]));
}

TEST_CASE("gae all-zero inputs") {
    VectorXd rewards = VectorXd::Zero(5), values = VectorXd::Zero(6);
    auto out = compute_gae(rewards, values, std::vector<uint8_t>(5, 0), 0.8, 0.95);
    CHECK(out.advantages.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gae matches the brute-force double sum") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int T = 2 + static_cast<int>(rng.uniform_index(31));
        VectorXd rewards(T), values(T + 1);
        for (int t = 0; t < T; ++t) rewards[t] = rng.normal();
        for (int t = 0; t <= T; ++t) values[t] = rng.normal();
        std::vector<uint8_t> dones(T, 0);
        dones[T - 1] = 1;
        double gamma = rng.uniform(0.5, 0.99), lambda = rng.uniform(0.0, 1.0);
        auto out = compute_gae(rewards, values, dones, gamma, lambda);
        for (int t = 0; t < T; ++t) {
            double acc = 0.0;
            for (int l = 0; t + l < T; ++l) {
                double next_v = (t + l + 1 < T) ? values[t + l + 1] : 0.0;
                double delta = rewards[t + l] + gamma * next_v - values[t + l];
                acc += std::pow(gamma * lambda, l) * delta;
            }
            CHECK(std::abs(out.advantages[t] - acc) < 1e-10);
        }
    }
}

TEST_CASE("clip objective arithmetic and zero-gradient regions") {
    double d;
    CHECK(clip_objective_term(1.5, 1.0, 0.2, &d) == doctest::Approx(1.2));
    CHECK(d == 0.0);
    CHECK(clip_objective_term(1.0, 2.5, 0.2, &d) == doctest::Approx(2.5));
    CHECK(d == doctest::Approx(2.5));
    CHECK(clip_objective_term(0.5, -1.0, 0.2, &d) == doctest::Approx(-0.8));
    CHECK(d == 0.0);

    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        double ratio = rng.uniform(0.0, 2.5);
        double adv = rng.uniform(-2, 2);
        double eps = rng.uniform(0.05, 0.4);
        clip_objective_term(ratio, adv, eps, &d);
        if (ratio > 1 + eps && adv > 0) CHECK(d == 0.0);
        if (ratio < 1 - eps && adv < 0) CHECK(d == 0.0);
        // interior: gradient equals the advantage
        if (ratio > 1 - eps && ratio < 1 + eps) CHECK(d == adv);
    }
}

TEST_CASE("value normalizer round-trip and moments") {
    ValueNormalizer vn;
    Rng rng(13);
    VectorXd batch(256);
    for (int i = 0; i < 256; ++i) batch[i] = rng.normal(5.0, 3.0);
    vn.update(batch);
    CHECK(vn.mean() == doctest::Approx(batch.mean()));
    for (double x : {-3.0, 0.0, 7.5}) CHECK(vn.denormalize(vn.normalize(x)) == doctest::Approx(x).epsilon(1e-9));

    // streaming matches one-shot
    ValueNormalizer once, stream;
    VectorXd all(500);
    for (int i = 0; i < 500; ++i) all[i] = rng.normal(-2.0, 1.7);
    once.update(all);
    stream.update(all.head(200));
    stream.update(all.tail(300));
    CHECK(stream.mean() == doctest::Approx(once.mean()).epsilon(1e-9));
    CHECK(stream.variance() == doctest::Approx(once.variance()).epsilon(1e-9));
}

namespace {

low::LowEnvOptions smoke_env_options() {
    low::LowEnvOptions opt;
    opt.cfg.env.n_agents = 1;
    opt.cfg.env.n_targets = 0;
    opt.cfg.env.has_adversary = false;
    opt.cfg.env.episode_steps = 100;
    opt.cfg.train.workers = 4;
    opt.cfg.train.lr = 3e-4;
    opt.obstacle_density = 0.0;
    opt.fixed_anchor = Vec2{3.0, 2.0};
    return opt;
}

}  // namespace

TEST_CASE("collect_rollouts shape and determinism") {
    auto opt = smoke_env_options();
    Rng rng(1);
    low::LowPolicy policy("p", 2, 16, 32, rng);
    PpoTrainer trainer(policy, 6, opt.cfg.train, 99);
    EnvFactory factory = [&](int) { return std::make_unique<low::FormationEnv>(opt); };

    RolloutBuffer a = trainer.collect(factory, 1, 0);
    CHECK(a.agent_steps() == 100);  // 1 worker, T=100, one agent

    RolloutBuffer b = trainer.collect(factory, 1, 0);
    REQUIRE(a.steps.size() == b.steps.size());
    for (size_t t = 0; t < a.steps.size(); ++t) {
        CHECK(a.steps[t].reward == b.steps[t].reward);
        CHECK((a.steps[t].inputs - b.steps[t].inputs).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.steps[t].actions - b.steps[t].actions).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.steps[t].value_old == b.steps[t].value_old);
    }

    // more episodes scale the buffer linearly and keep episode slots ordered
    RolloutBuffer c = trainer.collect(factory, 4, 0);
    CHECK(c.agent_steps() == 400);
    for (size_t t = 0; t < a.steps.size(); ++t)
        CHECK(c.steps[t].reward == a.steps[t].reward);  // episode 0 identical
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
    auto opt = smoke_env_options();
    opt.cfg.train.lr = 0.0;
    opt.cfg.train.episodes = 4;
    Rng rng(2);
    low::LowPolicy policy("p", 2, 16, 32, rng);
    nn::ParamList ps;
    policy.collect_params(ps);
    std::vector<nn::MatrixXd> before;
    for (auto* p : ps) before.push_back(p->w);

    PpoTrainer trainer(policy, 6, opt.cfg.train, 7);
    EnvFactory factory = [&](int) { return std::make_unique<low::FormationEnv>(opt); };
    auto result = trainer.train(factory, 4);
    CHECK(result.curve.size() == 4);  // one log record per episode
    for (size_t i = 0; i < ps.size(); ++i)
        CHECK((ps[i]->w - before[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("point-mass navigation improves with training") {
    // desk-scale sanity slice of the full acceptance smoke test
    auto opt = smoke_env_options();
    Rng rng(3);
    low::LowPolicy policy("p", 2, 16, 64, rng);
    PpoTrainer trainer(policy, 6, opt.cfg.train, 5);
    EnvFactory factory = [&](int) { return std::make_unique<low::FormationEnv>(opt); };

    auto eval_mean_final_dist = [&]() {
        double sum = 0.0;
        for (int e = 0; e < 10; ++e) {
            low::FormationEnv env(opt);
            env.reset(9000 + e);
            for (int t = 0; t < env.horizon(); ++t) {
                nn::MatrixXd in = env.observe_inputs();
                nn::MatrixXd mu = policy.mean_batch(in);
                env.step(mu);
            }
            sum += distance(env.world().agents[0].pos, env.anchor());
        }
        return sum / 10;
    };

    double before = eval_mean_final_dist();
    trainer.train(factory, 60);
    double after = eval_mean_final_dist();
    CHECK(after < before);
}
