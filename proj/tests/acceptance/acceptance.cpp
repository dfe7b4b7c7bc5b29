// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "swarm/adversary.hpp"
#include "swarm/formation.hpp"
#include "swarm/harness/metrics.hpp"
#include "swarm/harness/rundir.hpp"
#include "swarm/high/pg_check.hpp"
#include "swarm/high/trainer.hpp"
#include "swarm/lidar.hpp"
#include "swarm/low/atm.hpp"
#include "swarm/low/distill.hpp"
#include "swarm/net/lockstep.hpp"
#include "swarm/nn/checkpoint.hpp"
#include "swarm/rl/gae.hpp"
#include "../grad_check.hpp"
#include "../oracles.hpp"

using namespace swarm;

namespace {

int g_failures = 0;

class Criterion {
 public:
    Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {
        start_ = std::chrono::steady_clock::now();
    }
    void result(bool pass, const std::string& detail) {
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", pass ? "PASS" : "FAIL", id_,
                    name_.c_str(), detail.c_str(), secs);
        std::fflush(stdout);
        if (!pass) ++g_failures;
    }

 private:
    int id_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- 1
void criterion_rewards() {
    Criterion c(1, "reward engine matches the brute-force oracle");
    const RewardConstants rc;
    Rng rng(20260101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        WorldState w = oracle::random_world(rng);
        double prev_f = rng.uniform(-3, 0);
        std::vector<double> mins;
        for (int i = 0; i < w.n_agents(); ++i) {
            auto scan = lidar_scan(w, i);
            mins.push_back(*std::min_element(scan.begin(), scan.end()));
        }
        Grouping g = partition_groups(w);
        std::vector<double> urg;
        for (const auto& t : w.targets) urg.push_back(t.urgency);

        double f = formation_reward(g, w, prev_f, rc);
        double n = navigation_reward(w);
        double t = task_reward_and_decay(w, g, rc, urg);
        double e = evasion_reward(w, rc);
        double cl = collision_reward(mins, rc);

        auto ref = oracle::rewards_brute(w, prev_f, mins, rc);
        worst = std::max({worst, std::abs(f - ref.formation), std::abs(n - ref.navigation),
                          std::abs(t - ref.task), std::abs(e - ref.evasion),
                          std::abs(cl - ref.collision)});
        for (size_t k = 0; k < urg.size(); ++k)
            worst = std::max(worst, std::abs(urg[k] - ref.urgencies_after[k]));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "1000 random worlds, max |diff| = %.3g (tol 1e-9)", worst);
    c.result(worst < 1e-9, buf);
}

// ---------------------------------------------------------------- 2
void criterion_geometry() {
    Criterion c(2, "directed-Hausdorff properties and lidar vs 1 mm ray march");
    Rng rng(2);
    bool hd_ok = true;
    auto rand_set = [&](int n) {
        std::vector<Vec2> s;
        for (int i = 0; i < n; ++i) s.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        return s;
    };
    for (int trial = 0; trial < 1000 && hd_ok; ++trial) {
        auto a = rand_set(1 + static_cast<int>(rng.uniform_index(8)));
        auto b = rand_set(1 + static_cast<int>(rng.uniform_index(8)));
        auto cc = rand_set(1 + static_cast<int>(rng.uniform_index(8)));
        if (directed_hausdorff(a, a) != 0.0) hd_ok = false;
        double ab = directed_hausdorff(a, b);
        if (ab < 0.0) hd_ok = false;
        if (directed_hausdorff(a, cc) > ab + directed_hausdorff(b, cc) + 1e-12) hd_ok = false;
    }

    double worst = 0.0;
    for (int scene = 0; scene < 1000; ++scene) {
        EnvConfig cfg;
        cfg.n_agents = 3;
        cfg.obstacle_density = 0.0;
        cfg.has_adversary = false;
        WorldState w = init_world(cfg, 9000 + scene);
        int n_obs = static_cast<int>(rng.uniform_index(6)) + 1;
        for (int k = 0; k < n_obs; ++k) {
            Vec2 ctr{rng.uniform(-4, 4), rng.uniform(-4, 4)};
            double r = rng.uniform(0.2, 0.6);
            bool overlap = false;
            for (const auto& a : w.agents)
                if (distance(ctr, a.pos) <= r + 0.05) overlap = true;
            if (overlap) {
                --k;
                continue;
            }
            w.obstacles.push_back({ctr, r});
        }
        std::vector<std::pair<Vec2, double>> circles;
        for (const auto& o : w.obstacles) circles.emplace_back(o.center, o.radius);
        for (int j = 1; j < 3; ++j) circles.emplace_back(w.agents[j].pos, cfg.body_radius);
        auto scan = lidar_scan(w, 0);
        for (int m = 0; m < cfg.lidar_rays; ++m) {
            double ang = 2.0 * M_PI * m / cfg.lidar_rays;
            double ref = oracle::lidar_march(w.agents[0].pos, ang, cfg.obs_range, circles);
            worst = std::max(worst, std::abs(scan[m] - ref));
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "HD properties %s; lidar max |diff| = %.2g mm (tol 2 mm)",
                  hd_ok ? "hold" : "VIOLATED", worst * 1000);
    c.result(hd_ok && worst < 2e-3, buf);
}

// ---------------------------------------------------------------- 3
void criterion_gradients() {
    Criterion c(3, "finite-difference checks on all primitives and composed nets");
    double worst = 0.0;
    Rng rng(3);

    {  // dense net
        nn::DenseNet net("fd", {7, 24, 12, 3}, nn::Act::kTanh, nn::Act::kTanh, rng);
        nn::ParamList ps;
        net.collect(ps);
        nn::MatrixXd x = nn::MatrixXd::Random(5, 7), coef = nn::MatrixXd::Random(5, 3);
        auto loss = [&] { return (net.forward(x).array() * coef.array()).sum(); };
        auto backward = [&] {
            for (auto* p : ps) p->g.setZero();
            nn::DenseNet::Cache cache;
            net.forward(x, cache);
            net.backward(cache, coef);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward, 120));
    }
    {  // memory cell
        nn::MemoryCell cell("mc", 12, 9, rng);
        nn::ParamList ps;
        cell.collect(ps);
        nn::VectorXd m = nn::VectorXd::Random(12), o = nn::VectorXd::Random(9),
                     coef = nn::VectorXd::Random(12);
        auto loss = [&] { return cell.forward(m, o).dot(coef); };
        auto backward = [&] {
            for (auto* p : ps) p->g.setZero();
            nn::MemoryCell::Cache cache;
            cell.forward(m, o, cache);
            cell.backward(cache, coef);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward, 120));
    }
    {  // distance encoder
        nn::DistanceEncoder enc("de", 32, rng);
        nn::ParamList ps;
        enc.collect(ps);
        nn::VectorXd coef = nn::VectorXd::Random(32);
        auto loss = [&] { return enc.encode(1.77).dot(coef); };
        auto backward = [&] {
            for (auto* p : ps) p->g.setZero();
            enc.backward(1.77, coef);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward));
    }
    {  // attention
        nn::MultiHeadAttention mha("at", 16, 8, 4, rng);
        nn::ParamList ps;
        mha.collect(ps);
        nn::VectorXd q = nn::VectorXd::Random(16), coef = nn::VectorXd::Random(8);
        nn::MatrixXd kv = nn::MatrixXd::Random(5, 16);
        auto loss = [&] { return mha.forward(q, kv).dot(coef); };
        auto backward = [&] {
            for (auto* p : ps) p->g.setZero();
            nn::MultiHeadAttention::Cache cache;
            mha.forward(q, kv, cache);
            mha.backward(cache, coef);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward, 120));
    }
    {  // gaussian head
        nn::GaussianHead head("gh", 2, 0.7);
        nn::ParamList ps;
        head.collect(ps);
        nn::MatrixXd mu = nn::MatrixXd::Random(4, 2), act = nn::MatrixXd::Random(4, 2);
        nn::VectorXd w = nn::VectorXd::Random(4);
        auto loss = [&] { return head.log_prob_batch(mu, act).dot(w) + 0.3 * head.entropy(); };
        auto backward = [&] {
            for (auto* p : ps) p->g.setZero();
            head.backward(mu, act, w, 0.3);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward));
    }
    {  // composed low policy (PPO-style objective)
        Rng prng(31);
        low::LowPolicy p("lp", 10, 16, 24, prng);
        nn::ParamList ps;
        p.collect_params(ps);
        nn::MatrixXd inputs = nn::MatrixXd::Random(6, 26), actions = nn::MatrixXd::Random(6, 2);
        nn::VectorXd w = nn::VectorXd::Random(6);
        auto loss = [&] {
            nn::MatrixXd mu = p.mean_batch(inputs);
            return p.gaussian().log_prob_batch(mu, actions).dot(w) +
                   0.05 * 6 * p.gaussian().entropy();
        };
        auto backward = [&] {
            for (auto* prm : ps) prm->g.setZero();
            nn::VectorXd ent;
            p.evaluate_actions(inputs, actions, ent);
            p.backward_objective(w, nn::VectorXd::Constant(6, 0.05));
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(ps, loss, backward, 80));
    }
    {  // composed high stack: selector over consensus messages + supervised path
        Rng hrng(32);
        high::ConsensusModule cm("cm", 12, 8, hrng, 8, 2, 16);
        nn::ParamList cps;
        cm.collect_params(cps);
        nn::VectorXd m_prev = nn::VectorXd::Random(8), obs = nn::VectorXd::Random(12),
                     label = nn::VectorXd::Random(8);
        nn::MatrixXd msgs = nn::MatrixXd::Random(3, 8);
        nn::VectorXd dists(3);
        dists << 0.4, 1.0, 2.2;
        auto loss = [&] {
            auto [m, g] = cm.forward(m_prev, obs, msgs, dists, nullptr);
            return (g - label).squaredNorm() / 8.0;
        };
        auto backward = [&] {
            for (auto* p : cps) p->g.setZero();
            high::ConsensusModule::Cache cache;
            auto [m, g] = cm.forward(m_prev, obs, msgs, dists, &cache);
            cm.backward(cache, (2.0 / 8.0) * (g - label));
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(cps, loss, backward, 80));

        high::HighPolicy hp("hp", 12, 8, hrng, 16);
        nn::ParamList hps;
        hp.collect_params(hps);
        nn::MatrixXd inputs = nn::MatrixXd::Random(5, 20);
        nn::MatrixXd actions(5, 1);
        for (int i = 0; i < 5; ++i) actions(i, 0) = i % 9;
        nn::VectorXd w = nn::VectorXd::Random(5), we = nn::VectorXd::Random(5);
        auto hloss = [&] {
            double acc = 0.0;
            for (int i = 0; i < 5; ++i) {
                nn::VectorXd lg = hp.logits(inputs.row(i).head(12).transpose(),
                                            inputs.row(i).tail(8).transpose());
                acc += w[i] * nn::categorical_log_prob(lg, static_cast<int>(actions(i, 0))) +
                       we[i] * nn::categorical_entropy(lg);
            }
            return acc;
        };
        auto hbackward = [&] {
            for (auto* p : hps) p->g.setZero();
            nn::VectorXd ent;
            hp.evaluate_actions(inputs, actions, ent);
            hp.backward_objective(w, we);
        };
        worst = std::max(worst, gradcheck::max_param_rel_err(hps, hloss, hbackward, 80));
    }

    char buf[96];
    std::snprintf(buf, sizeof(buf), "max relative error %.3g (tol 1e-4)", worst);
    c.result(worst < 1e-4, buf);
}

// ---------------------------------------------------------------- 4
void criterion_theorem() {
    Criterion c(4, "hierarchical policy-gradient identity on enumerable MDPs");
    struct Fixture {
        const char* name;
        high::EnumMdp mdp;
        nn::MatrixXd theta;
    };
    std::vector<Fixture> fixtures;
    {
        nn::MatrixXd th(3, 2);
        th << 0.3, -0.2, 0.8, 0.1, -0.5, 0.4;
        fixtures.push_back({"deterministic-low", high::fixture_deterministic_low(), th});
    }
    {
        nn::MatrixXd th(2, 3);
        th << 0.2, -0.4, 0.6, -0.1, 0.5, 0.0;
        fixtures.push_back({"stochastic-low", high::fixture_gaussian_low(), th});
        fixtures.push_back({"soft-anchor", high::fixture_deterministic_high(), th});
    }
    {
        nn::MatrixXd th(3, 2);
        th << 0.3, -0.2, 0.8, 0.1, -0.5, 0.4;
        fixtures.push_back({"uniform-reward", high::fixture_uniform_reward(), th});
    }

    double worst_fd = 0.0, worst_sigma = 0.0;
    bool all_ok = true;
    for (auto& f : fixtures) {
        auto res = high::theorem1_check(f.mdp, f.theta, 100000, 100, 20260404);
        worst_fd = std::max(worst_fd, res.max_rel_err_fd);
        worst_sigma = std::max(worst_sigma, res.max_sigma_distance);
        if (res.max_rel_err_fd >= 1e-5 || !res.mc_within_3se) all_ok = false;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "%zu fixtures: max FD rel err %.3g (tol 1e-5), MC max %.2f sigma (tol 3)",
                  fixtures.size(), worst_fd, worst_sigma);
    c.result(all_ok, buf);
}

// ---------------------------------------------------------------- 5
void criterion_gae_clip() {
    Criterion c(5, "GAE brute-force equivalence and clip zero-gradient regions");
    Rng rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int T = 2 + static_cast<int>(rng.uniform_index(31));
        rl::VectorXd rewards(T), values(T + 1);
        for (int t = 0; t < T; ++t) rewards[t] = rng.normal();
        for (int t = 0; t <= T; ++t) values[t] = rng.normal();
        std::vector<uint8_t> dones(T, 0);
        dones[T - 1] = 1;
        double gamma = rng.uniform(0.5, 0.99), lambda = rng.uniform(0.0, 1.0);
        auto out = rl::compute_gae(rewards, values, dones, gamma, lambda);
        for (int t = 0; t < T; ++t) {
            double acc = 0.0;
            for (int l = 0; t + l < T; ++l) {
                double next_v = (t + l + 1 < T) ? values[t + l + 1] : 0.0;
                acc += std::pow(gamma * lambda, l) *
                       (rewards[t + l] + gamma * next_v - values[t + l]);
            }
            worst = std::max(worst, std::abs(out.advantages[t] - acc));
        }
    }

    bool clip_ok = true;
    for (int i = 0; i < 10000; ++i) {
        double ratio = rng.uniform(0.0, 2.5), adv = rng.uniform(-2, 2),
               eps = rng.uniform(0.05, 0.4);
        double d;
        rl::clip_objective_term(ratio, adv, eps, &d);
        if (ratio > 1 + eps && adv > 0 && d != 0.0) clip_ok = false;
        if (ratio < 1 - eps && adv < 0 && d != 0.0) clip_ok = false;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "GAE max |diff| %.3g (tol 1e-10); clip regions %s", worst,
                  clip_ok ? "hold on 1e4 triples" : "VIOLATED");
    c.result(worst < 1e-10 && clip_ok, buf);
}

// ---------------------------------------------------------------- 6
void criterion_smoke() {
    Criterion c(6, "PPO smoke: point-mass navigation to a fixed anchor");
    low::LowEnvOptions opt;
    opt.cfg.env.n_agents = 1;
    opt.cfg.env.n_targets = 0;
    opt.cfg.env.has_adversary = false;
    opt.cfg.env.episode_steps = 100;
    opt.cfg.train.workers = 4;
    opt.cfg.train.lr = 3e-4;
    opt.obstacle_density = 0.0;
    opt.fixed_anchor = Vec2{3.0, 2.0};

    Rng rng(6);
    low::LowPolicy policy("p", 2, 16, 64, rng);
    rl::PpoTrainer trainer(policy, 6, opt.cfg.train, 60);
    trainer.train([&](int) { return std::make_unique<low::FormationEnv>(opt); }, 200);

    int hits = 0;
    for (int e = 0; e < 50; ++e) {
        low::FormationEnv env(opt);
        env.reset(77000 + e);
        for (int t = 0; t < env.horizon(); ++t) env.step(policy.mean_batch(env.observe_inputs()));
        if (distance(env.world().agents[0].pos, env.anchor()) < 1.0) ++hits;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "%d/50 deterministic eval episodes end within 1 m after 200 episodes (need 40)",
                  hits);
    c.result(hits >= 40, buf);
}

// ---------------------------------------------------------------- 7
namespace atm_eval {

double mean_hd_error(low::LowPolicy& policy, const low::LowEnvOptions& opt, int episodes) {
    double total = 0.0;
    long count = 0;
    std::vector<Vec2> tmpl = formation_template(3);
    for (int e = 0; e < episodes; ++e) {
        low::FormationEnv env(opt);
        env.reset(50000 + e);
        for (int t = 0; t < env.horizon(); ++t) {
            env.step(policy.mean_batch(env.observe_inputs()));
            const auto& w = env.world();
            std::vector<Vec2> rel;
            Vec2 mean{0, 0};
            for (const auto& a : w.agents) mean += a.pos;
            mean = mean / 3.0;
            for (const auto& a : w.agents) rel.push_back(a.pos - mean);
            total += directed_hausdorff(tmpl, rel);
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double collision_rate(low::LowPolicy& policy, const low::LowEnvOptions& opt, int episodes) {
    long agent_steps = 0, close_steps = 0;
    for (int e = 0; e < episodes; ++e) {
        low::FormationEnv env(opt);
        env.reset(61000 + e);
        for (int t = 0; t < env.horizon(); ++t) {
            env.step(policy.mean_batch(env.observe_inputs()));
            const auto& w = env.world();
            for (const auto& a : w.agents) {
                ++agent_steps;
                for (const auto& o : w.obstacles)
                    if (distance(a.pos, o.center) - o.radius < 0.2) {
                        ++close_steps;
                        break;
                    }
            }
        }
    }
    return 100.0 * static_cast<double>(close_steps) / static_cast<double>(agent_steps);
}

}  // namespace atm_eval

void criterion_atm() {
    Criterion c(7, "three-stage low-level training trend at desk scale (pattern 3)");
    low::AtmOptions opt;
    opt.cfg.env.n_agents = 3;
    opt.cfg.env.episode_steps = 100;
    opt.cfg.train.workers = 4;
    opt.cfg.train.lr = 3e-4;
    opt.episodes1 = 100;
    opt.episodes2 = 100;
    opt.episodes3 = 100;
    opt.obstacle_density = 0.03;
    auto res = low::atm_train(opt, 7);

    low::LowEnvOptions free_env;
    free_env.cfg = opt.cfg;
    free_env.obstacle_density = 0.0;

    Rng rng(70);
    low::LowPolicy random_policy("rand", 2 + 4 * 2, 16, 128, rng);
    double hd_random = atm_eval::mean_hd_error(random_policy, free_env, 50);
    double hd_step1 = atm_eval::mean_hd_error(*res.policy_step1, free_env, 50);

    low::LowEnvOptions obs_env;
    obs_env.cfg = opt.cfg;
    obs_env.obstacle_density = 0.05;  // the denser evaluation setting
    double c_step1 = atm_eval::collision_rate(*res.policy_step1, obs_env, 50);
    double c_final = atm_eval::collision_rate(*res.policy_final, obs_env, 50);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "HD: step1 %.3f vs random %.3f (need <50%%); C%%: final %.3f vs step1 %.3f "
                  "(need strictly lower)",
                  hd_step1, hd_random, c_final, c_step1);
    c.result(hd_step1 < 0.5 * hd_random && c_final < c_step1, buf);
}

// ---------------------------------------------------------------- 8
void criterion_distill() {
    Criterion c(8, "policy distillation: held-out MSE and loss-curve shape");
    Config cfg;
    cfg.env.lidar_rays = 16;
    cfg.env.episode_steps = 100;

    low::DistillBuffer buffer(20000);
    for (int pattern : {3, 5}) {
        Config tcfg = cfg;
        tcfg.env.n_agents = pattern;
        Rng trng(800 + pattern);
        low::LowPolicy teacher("t", 2 + 4 * (pattern - 1), 16, 64, trng);
        {
            // non-degenerate action targets: unit-gain output layer
            nn::ParamList hs;
            teacher.head().collect(hs);
            Rng gr(900 + pattern);
            nn::orthogonal_init(hs[hs.size() - 2]->w, 1.0, gr);
        }
        low::LowEnvOptions env_opt;
        env_opt.cfg = tcfg;
        env_opt.cfg.env.n_targets = 0;
        env_opt.obstacle_density = 0.02;
        low::collect_teacher_tuples(teacher, pattern, env_opt, 5000, 7, 4000 + pattern, buffer);
    }
    // shuffled split: teacher blocks interleave
    std::vector<size_t> order(buffer.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng(88);
    for (size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
    low::DistillBuffer train_buf(buffer.size()), held_buf(buffer.size());
    for (size_t k = 0; k < order.size(); ++k) {
        low::DistillTuple t;
        t.input = buffer.at(order[k]).input;
        t.action = buffer.at(order[k]).action;
        t.pattern = buffer.at(order[k]).pattern;
        (k < order.size() * 9 / 10 ? train_buf : held_buf).add(std::move(t));
    }

    Rng srng(8);
    low::LowPolicy student("s", 2 + 4 * 7, 16, 256, srng);
    auto report = low::distill(student, train_buf, 2000, 600, 1e-3, 8);
    double held_mse = low::distill_mse(student, held_buf, 0, held_buf.size());

    // 100-epoch window means must not increase
    bool monotone = true;
    double prev = -1.0;
    double worst_uptick = 0.0;
    for (size_t w = 0; w + 100 <= report.loss_curve.size(); w += 100) {
        double mean = 0.0;
        for (size_t k = w; k < w + 100; ++k) mean += report.loss_curve[k];
        mean /= 100.0;
        if (prev >= 0.0 && mean > prev) {
            worst_uptick = std::max(worst_uptick, (mean - prev) / prev);
            if (mean > prev * 1.02) monotone = false;
        }
        prev = mean;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "held-out MSE %.2e (tol 1e-2); window means %s (worst uptick %.2f%%)",
                  held_mse, monotone ? "non-increasing" : "INCREASED", worst_uptick * 100);
    c.result(held_mse < 1e-2 && monotone, buf);
}

// ---------------------------------------------------------------- 9
void criterion_consensus() {
    Criterion c(9, "consensus estimator beats the zero-message ablation; stop-gradient exact");
    Config cfg;
    cfg.env.n_agents = 8;
    cfg.env.episode_steps = 200;
    cfg.env.decision_interval = 10;
    cfg.env.obstacle_density = 0.0;
    const int obs_dim = observation_width(cfg.env);
    const char variant = 'O';

    // dataset logged under a frozen random module
    Rng frozen_rng(90);
    high::ConsensusModule frozen("frozen", obs_dim, high::label_dim(variant, 8), frozen_rng);
    high::HighEnvOptions env_opt;
    env_opt.cfg = cfg;
    env_opt.consensus = &frozen;
    env_opt.adversary = adv::AdversaryKind::kNone;
    env_opt.label_variant = variant;
    high::HighLevelEnv env(env_opt);
    high::ConsensusBuffer data(100000);
    Rng act_rng(91);
    for (int ep = 0; ep < 6; ++ep) {
        env.reset(7700 + ep);
        for (int d = 0; d < env.horizon(); ++d) {
            env.observe_inputs();
            nn::MatrixXd acts(8, 1);
            for (int i = 0; i < 8; ++i) acts(i, 0) = static_cast<double>(act_rng.uniform_index(9));
            env.step(acts);
        }
        for (auto& t : env.tuples()) data.push(std::move(t));
        env.tuples().clear();
    }
    const size_t split = data.size() * 4 / 5;

    auto train_arm = [&](bool zero_messages) {
        Rng arm_rng(42);  // identical init for both arms
        high::ConsensusModule arm("arm", obs_dim, high::label_dim(variant, 8), arm_rng);
        nn::ParamList ps;
        arm.collect_params(ps);
        nn::Adam opt(ps, 1e-3);
        Rng train_rng(43);
        // train on the first split only, identical budget
        high::ConsensusBuffer train_view(split);
        for (size_t i = 0; i < split; ++i) {
            high::ConsensusTuple t = data.at(i);
            train_view.push(std::move(t));
        }
        high::consensus_update(arm, opt, train_view, 1200, 128, train_rng, zero_messages);
        return high::consensus_eval(arm, data, split, data.size(), zero_messages);
    };
    double mse_msgs = train_arm(false);
    double mse_zero = train_arm(true);

    // stop-gradient probe: RL updates leave the consensus parameters bitwise
    // untouched and their gradient buffers exactly zero
    Config scfg;
    scfg.env.n_agents = 3;
    scfg.env.episode_steps = 20;
    scfg.train.workers = 1;
    scfg.train.update_epochs = 2;
    scfg.train.consensus_every_episodes = 1 << 30;
    high::HighStack stack = high::HighStack::make(scfg.env, 'A', 9);
    nn::ParamList cons = stack.consensus_params();
    std::vector<nn::MatrixXd> before;
    for (auto* p : cons) before.push_back(p->w);
    high::HighTrainOptions topt;
    topt.cfg = scfg;
    topt.episodes = 2;
    topt.adversary = adv::AdversaryKind::kRuleNearest;
    high::train_high(stack, topt, 5);
    bool stopgrad = true;
    for (size_t i = 0; i < cons.size(); ++i) {
        if ((cons[i]->w - before[i]).cwiseAbs().maxCoeff() != 0.0) stopgrad = false;
        if (cons[i]->g.cwiseAbs().maxCoeff() != 0.0) stopgrad = false;
    }

    double gain = (mse_zero - mse_msgs) / mse_zero;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "held-out MSE %.4f with messages vs %.4f ablated (gain %.1f%%, need >=20%%); "
                  "stop-gradient %s",
                  mse_msgs, mse_zero, gain * 100, stopgrad ? "exact" : "VIOLATED");
    c.result(gain >= 0.20 && stopgrad, buf);
}

// ---------------------------------------------------------------- 10
void criterion_distributed() {
    Criterion c(10, "lockstep equals single-process bitwise; packet fuzz round-trip");
    Rng rng(10);
    bool fuzz_ok = true;
    for (int i = 0; i < 100000; ++i) {
        net::WirePacket p;
        p.kind = static_cast<net::PacketKind>(rng.uniform_index(6));
        p.sender = static_cast<uint8_t>(rng.uniform_index(256));
        p.step = static_cast<uint32_t>(rng.next_u64());
        p.payload.resize(rng.uniform_index(64));
        for (double& v : p.payload) v = rng.normal();
        auto bytes = net::encode_packet(p);
        net::WirePacket q;
        if (!net::decode_packet(bytes.data(), bytes.size(), q) || !(p == q)) fuzz_ok = false;
    }

    const char* bin = std::getenv("SWARM_BIN");
    if (!bin) {
        c.result(false, "SWARM_BIN not set (run through ctest)");
        return;
    }

    Config cfg;
    cfg.env.n_agents = 8;
    cfg.env.episode_steps = 400;
    cfg.env.obstacle_density = 0.02;
    harness::RunDir dir = harness::RunDir::create("acceptance_net");
    Rng srng(Rng::derive(99, std::hash<std::string>{}("student")));
    low::LowPolicy student("student", 2 + 4 * 7, cfg.env.lidar_rays, 64, srng);
    high::HighStack stack = high::HighStack::make(cfg.env, 'A', 31);
    {
        nn::ParamList sp;
        student.collect_params(sp);
        nn::save_checkpoint(dir.file("student.ckpt"), sp);
        nn::ParamList cp = stack.consensus_params();
        nn::save_checkpoint(dir.file("consensus.ckpt"), cp);
        nn::ParamList pp = stack.policy_params();
        nn::save_checkpoint(dir.file("selector.ckpt"), pp);
        std::ofstream(dir.file("config.json")) << config_to_json(Config{cfg.env, {}, {}, {}, 1});
    }

    harness::AgentCore::Options core;
    core.consensus = stack.consensus.get();
    core.selector = stack.policy.get();
    core.low = &student;
    core.student_slots = 7;
    core.decision_interval = cfg.env.decision_interval;
    core.n_targets = cfg.env.n_targets;

    bool all_equal = true;
    int seeds_run = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        harness::EpisodeOptions ep;
        ep.cfg.env = cfg.env;
        ep.adversary = adv::AdversaryKind::kRuleNearest;
        harness::LocalProvider provider(core, cfg.env.n_agents);
        auto local = harness::run_episode(ep, provider, seed);
        harness::write_trajectory(dir.file("local.jsonl"), local);

        net::DistributedOptions opt;
        opt.cfg.env = cfg.env;
        opt.base_port = 48900;
        opt.agent_binary = bin;
        opt.adversary = adv::AdversaryKind::kRuleNearest;
        opt.agent_extra_args = {"--config", dir.file("config.json"),
                                "--low", dir.file("student.ckpt"),
                                "--low-kind", "student",
                                "--student-hidden", "64",
                                "--high", dir.file("selector.ckpt"),
                                "--consensus", dir.file("consensus.ckpt"),
                                "--labels", "A"};
        auto res = net::run_distributed(opt, seed);
        harness::write_trajectory(dir.file("remote.jsonl"), res.trajectory);
        if (slurp(dir.file("local.jsonl")) != slurp(dir.file("remote.jsonl"))) all_equal = false;
        ++seeds_run;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d/10 seeds x 400 steps bitwise equal; fuzz %s", seeds_run,
                  fuzz_ok ? "100000/100000" : "FAILED");
    c.result(all_equal && fuzz_ok, buf);
}

// ---------------------------------------------------------------- 11
void criterion_eval_determinism() {
    Criterion c(11, "eval with a fixed seed reproduces the metrics table byte for byte");
    const char* bin = std::getenv("SWARM_BIN");
    if (!bin) {
        c.result(false, "SWARM_BIN not set (run through ctest)");
        return;
    }
    std::string cmd1 = std::string(bin) +
                       " --seed 5 --out acceptance_eval_a eval --mode low --episodes 3 >/dev/null";
    std::string cmd2 = std::string(bin) +
                       " --seed 5 --out acceptance_eval_b eval --mode low --episodes 3 >/dev/null";
    int r1 = std::system(cmd1.c_str());
    int r2 = std::system(cmd2.c_str());
    std::string a = slurp("acceptance_eval_a/metrics.csv");
    std::string b = slurp("acceptance_eval_b/metrics.csv");
    char buf[96];
    std::snprintf(buf, sizeof(buf), "two CLI runs, %zu bytes each, %s", a.size(),
                  (!a.empty() && a == b) ? "identical" : "DIFFER");
    c.result(r1 == 0 && r2 == 0 && !a.empty() && a == b, buf);
}

}  // namespace

int main(int argc, char** argv) {
    bool fast = argc > 1 && std::string(argv[1]) == "--fast";
    (void)fast;
    criterion_rewards();
    criterion_geometry();
    criterion_gradients();
    criterion_theorem();
    criterion_gae_clip();
    criterion_smoke();
    criterion_atm();
    criterion_distill();
    criterion_consensus();
    criterion_distributed();
    criterion_eval_determinism();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures);
    return g_failures;
}
