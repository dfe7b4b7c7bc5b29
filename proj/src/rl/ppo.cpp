#include "swarm/rl/ppo.hpp"

#include <cmath>
#include <thread>

#include "swarm/rl/gae.hpp"

namespace swarm::rl {

double clip_objective_term(double ratio, double advantage, double eps, double* dterm_dratio) {
    double unclipped = ratio * advantage;
    double clipped = clamp(ratio, 1.0 - eps, 1.0 + eps) * advantage;
    if (unclipped <= clipped) {
        if (dterm_dratio) *dterm_dratio = advantage;
        return unclipped;
    }
    if (dterm_dratio)
        *dterm_dratio = (ratio >= 1.0 - eps && ratio <= 1.0 + eps) ? advantage : 0.0;
    return clipped;
}

PpoTrainer::PpoTrainer(PpoPolicy& policy, int state_dim, const TrainConfig& cfg, uint64_t seed)
    : policy_(policy), cfg_(cfg), seed_(seed) {
    Rng rng(Rng::derive(seed, 0xC217));
    critic_ = std::make_unique<nn::DenseNet>(
        "critic", std::vector<int>{state_dim, 128, 128, 1}, nn::Act::kTanh, nn::Act::kIdentity,
        rng, std::sqrt(2.0), 1.0);
    nn::ParamList pp;
    policy_.collect_params(pp);
    policy_opt_ = std::make_unique<nn::Adam>(pp, cfg.lr);
    nn::ParamList cp;
    critic_->collect(cp);
    critic_opt_ = std::make_unique<nn::Adam>(cp, cfg.critic_lr);
}

ParamList PpoTrainer::all_params() {
    ParamList ps;
    policy_.collect_params(ps);
    critic_->collect(ps);
    return ps;
}

double PpoTrainer::value_of(const VectorXd& state) const {
    MatrixXd v = critic_->forward(kStateScale * state.transpose());
    return vnorm_.denormalize(v(0, 0));
}

RolloutBuffer PpoTrainer::collect(const EnvFactory& factory, int n_episodes, int iteration) {
    const int workers = std::max(1, std::min(cfg_.workers, n_episodes));
    std::vector<std::vector<StepRecord>> episodes(n_episodes);

    auto run_worker = [&](int w) {
        auto env = factory(w);
        for (int ep = w; ep < n_episodes; ep += workers) {
            uint64_t ep_seed = Rng::derive(seed_, 0xE5, iteration, ep);
            Rng sample_rng(Rng::derive(ep_seed, 0x5A));
            env->reset(ep_seed);
            const int T = env->horizon();
            const int n = env->n_policy_agents();
            std::vector<StepRecord>& out = episodes[ep];
            out.reserve(T);
            for (int t = 0; t < T; ++t) {
                StepRecord rec;
                rec.state = env->state();
                rec.inputs = env->observe_inputs();
                rec.actions.resize(n, policy_.action_cols());
                rec.logp_old.resize(n);
                for (int i = 0; i < n; ++i) {
                    VectorXd a;
                    double lp;
                    policy_.act(rec.inputs.row(i).transpose(), &sample_rng, a, lp);
                    rec.actions.row(i) = a.transpose();
                    rec.logp_old[i] = lp;
                }
                rec.value_old = value_of(rec.state);
                rec.reward = env->step(rec.actions);
                rec.comps = env->components();
                rec.done = (t + 1 == T) ? 1 : 0;
                if (rec.done) rec.value_bootstrap = value_of(env->state());
                out.push_back(std::move(rec));
            }
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
        for (auto& th : pool) th.join();
    }

    RolloutBuffer buf;
    for (auto& ep : episodes)
        for (auto& rec : ep) buf.steps.push_back(std::move(rec));
    buf.agents_per_step = buf.steps.empty() ? 0 : static_cast<int>(buf.steps[0].logp_old.size());
    return buf;
}

void PpoTrainer::update(const RolloutBuffer& buffer) {
    const long T = static_cast<long>(buffer.steps.size());
    if (T == 0) return;
    const int n = buffer.agents_per_step;
    const long B = T * n;

    // per-episode GAE; episode ends are truncations, so the stored bootstrap
    // value carries the recursion over the cut
    GaeResult gae;
    gae.advantages.resize(T);
    gae.returns.resize(T);
    long ep_start = 0;
    for (long t = 0; t < T; ++t) {
        if (!buffer.steps[t].done) continue;
        const long len = t - ep_start + 1;
        VectorXd rewards(len), values(len + 1);
        for (long k = 0; k < len; ++k) {
            rewards[k] = buffer.steps[ep_start + k].reward;
            values[k] = buffer.steps[ep_start + k].value_old;
        }
        values[len] = buffer.steps[t].value_bootstrap;
        GaeResult seg =
            compute_gae(rewards, values, std::vector<uint8_t>(len, 0), cfg_.gamma, cfg_.gae_lambda);
        gae.advantages.segment(ep_start, len) = seg.advantages;
        gae.returns.segment(ep_start, len) = seg.returns;
        ep_start = t + 1;
    }
    SWARM_REQUIRE(ep_start == T, "update: buffer does not end on an episode boundary");

    // update the return statistics, then rescale the critic's output layer so
    // its denormalized predictions are unchanged under the new frame
    const bool had_stats = vnorm_.initialized();
    const double mu0 = vnorm_.mean(), s0 = std::sqrt(vnorm_.variance() + 1e-8);
    vnorm_.update(gae.returns);
    const double mu1 = vnorm_.mean(), s1 = std::sqrt(vnorm_.variance() + 1e-8);
    if (had_stats && (mu0 != mu1 || s0 != s1)) {
        critic_->output_weight().w *= s0 / s1;
        critic_->output_bias().w = (critic_->output_bias().w.array() * s0 + mu0 - mu1) / s1;
    }
    VectorXd targets_norm = vnorm_.normalize(gae.returns);

    // advantage normalization over the whole update batch
    double adv_mean = gae.advantages.mean();
    double adv_std = std::sqrt((gae.advantages.array() - adv_mean).square().mean()) + 1e-8;
    VectorXd adv = (gae.advantages.array() - adv_mean) / adv_std;

    MatrixXd states(T, buffer.steps[0].state.size());
    for (long t = 0; t < T; ++t) states.row(t) = kStateScale * buffer.steps[t].state.transpose();

    MatrixXd inputs(B, buffer.steps[0].inputs.cols());
    MatrixXd actions(B, buffer.steps[0].actions.cols());
    VectorXd logp_old(B), adv_agent(B);
    for (long t = 0; t < T; ++t) {
        for (int i = 0; i < n; ++i) {
            inputs.row(t * n + i) = buffer.steps[t].inputs.row(i);
            actions.row(t * n + i) = buffer.steps[t].actions.row(i);
            logp_old[t * n + i] = buffer.steps[t].logp_old[i];
            adv_agent[t * n + i] = adv[t];
        }
    }

    ParamList params = all_params();
    for (int epoch = 0; epoch < cfg_.update_epochs; ++epoch) {
        for (nn::Param* p : params) p->g.setZero();

        VectorXd entropy;
        VectorXd logp = policy_.evaluate_actions(inputs, actions, entropy);

        VectorXd dL_dlogp = VectorXd::Zero(B);
        for (long k = 0; k < B; ++k) {
            double ratio = std::exp(logp[k] - logp_old[k]);
            if (!std::isfinite(ratio)) {
                ++skipped_samples_;
                continue;
            }
            double dterm_dratio;
            clip_objective_term(ratio, adv_agent[k], cfg_.clip_eps, &dterm_dratio);
            // gradient ascent on the surrogate => descent on its negation
            dL_dlogp[k] = -dterm_dratio * ratio / static_cast<double>(B);
        }
        VectorXd dL_dent = VectorXd::Constant(B, -cfg_.entropy_coef / static_cast<double>(B));
        policy_.backward_objective(dL_dlogp, dL_dent);

        nn::DenseNet::Cache vcache;
        MatrixXd vhat = critic_->forward(states, vcache);
        MatrixXd dv = 2.0 * (vhat.col(0) - targets_norm) / static_cast<double>(T);
        critic_->backward(vcache, dv);

        nn::clip_grad_norm(params, cfg_.grad_clip);
        policy_opt_->step();
        critic_opt_->step();
    }

    double mean_abs_value = 0.0;
    MatrixXd vfinal = critic_->forward(states);
    for (long t = 0; t < T; ++t) mean_abs_value += std::abs(vnorm_.denormalize(vfinal(t, 0)));
    mean_abs_value /= static_cast<double>(T);
    if (mean_abs_value > cfg_.value_divergence_guard)
        throw TrainingDiverged("mean |value| exceeded guard: " + std::to_string(mean_abs_value));
}

TrainResult PpoTrainer::train(const EnvFactory& factory, int episodes,
                              const std::function<void(const LearnCurvePoint&)>& on_episode) {
    TrainResult result;
    int done_eps = 0;
    int iteration = 0;
    while (done_eps < episodes) {
        int batch = std::min(cfg_.workers, episodes - done_eps);
        RolloutBuffer buf = collect(factory, batch, iteration);

        // per-episode means for the learning curve (episodes end at done flags)
        double ep_sum = 0.0;
        RewardBreakdown comp_sum;
        long ep_len = 0;
        for (const auto& rec : buf.steps) {
            ep_sum += rec.reward;
            comp_sum.formation += rec.comps.formation;
            comp_sum.navigation += rec.comps.navigation;
            comp_sum.task += rec.comps.task;
            comp_sum.evasion += rec.comps.evasion;
            comp_sum.collision += rec.comps.collision;
            ++ep_len;
            if (rec.done) {
                LearnCurvePoint pt;
                pt.episode = done_eps;
                pt.mean_reward = ep_sum / ep_len;
                pt.mean_components.formation = comp_sum.formation / ep_len;
                pt.mean_components.navigation = comp_sum.navigation / ep_len;
                pt.mean_components.task = comp_sum.task / ep_len;
                pt.mean_components.evasion = comp_sum.evasion / ep_len;
                pt.mean_components.collision = comp_sum.collision / ep_len;
                result.curve.push_back(pt);
                if (on_episode) on_episode(pt);
                ++done_eps;
                ep_sum = 0.0;
                comp_sum = {};
                ep_len = 0;
            }
        }

        update(buf);
        ++iteration;
    }
    return result;
}

}  // namespace swarm::rl
