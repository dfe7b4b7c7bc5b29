#include "swarm/high/trainer.hpp"

namespace swarm::high {

HighStack HighStack::make(const EnvConfig& cfg, char label_variant, uint64_t seed) {
    HighStack s;
    Rng rng(Rng::derive(seed, 0x416));
    const int obs_dim = observation_width(cfg);
    s.consensus = std::make_unique<ConsensusModule>("consensus", obs_dim,
                                                    label_dim(label_variant, cfg.n_agents), rng);
    s.policy = std::make_unique<HighPolicy>("selector", obs_dim, s.consensus->msg_dim(), rng);
    return s;
}

nn::ParamList HighStack::consensus_params() const {
    nn::ParamList ps;
    consensus->collect_params(ps);
    return ps;
}

nn::ParamList HighStack::policy_params() const {
    nn::ParamList ps;
    policy->collect_params(ps);
    return ps;
}

namespace {

double tuple_loss_and_backward(ConsensusModule& module, const ConsensusTuple& t,
                               bool zero_messages, double grad_scale) {
    const VectorXd m_prev = zero_messages ? VectorXd::Zero(t.m_prev.size()) : t.m_prev;
    const MatrixXd msgs = zero_messages
                              ? MatrixXd::Zero(t.neighbor_msgs.rows(), t.neighbor_msgs.cols())
                              : t.neighbor_msgs;
    ConsensusModule::Cache cache;
    auto [m_next, ghat] = module.forward(m_prev, t.obs, msgs, t.neighbor_dists, &cache);
    VectorXd err = ghat - t.label;
    if (grad_scale != 0.0) {
        VectorXd dghat = (2.0 * grad_scale / static_cast<double>(err.size())) * err;
        module.backward(cache, dghat);
    }
    return err.squaredNorm() / static_cast<double>(err.size());
}

}  // namespace

double consensus_update(ConsensusModule& module, nn::Adam& opt, const ConsensusBuffer& buffer,
                        int iters, int batch, Rng& rng, bool zero_messages) {
    SWARM_REQUIRE(buffer.size() > 0, "consensus_update: empty buffer");
    double tail_sum = 0.0;
    int tail_count = 0;
    const int tail_start = iters - std::max(1, iters / 10);
    for (int it = 0; it < iters; ++it) {
        opt.zero_grad();
        const int B = static_cast<int>(std::min<size_t>(batch, buffer.size()));
        double loss = 0.0;
        for (int b = 0; b < B; ++b) {
            const ConsensusTuple& t = buffer.at(rng.uniform_index(buffer.size()));
            loss += tuple_loss_and_backward(module, t, zero_messages, 1.0 / B);
        }
        loss /= B;
        opt.step();
        if (it >= tail_start) {
            tail_sum += loss;
            ++tail_count;
        }
    }
    return tail_sum / std::max(1, tail_count);
}

double consensus_eval(const ConsensusModule& module, const ConsensusBuffer& buffer, size_t begin,
                      size_t end, bool zero_messages) {
    SWARM_REQUIRE(begin < end && end <= buffer.size(), "consensus_eval: bad range");
    double sum = 0.0;
    for (size_t i = begin; i < end; ++i) {
        const ConsensusTuple& t = buffer.at(i);
        const VectorXd m_prev = zero_messages ? VectorXd::Zero(t.m_prev.size()) : t.m_prev;
        const MatrixXd msgs = zero_messages
                                  ? MatrixXd::Zero(t.neighbor_msgs.rows(), t.neighbor_msgs.cols())
                                  : t.neighbor_msgs;
        auto [m_next, ghat] = module.forward(m_prev, t.obs, msgs, t.neighbor_dists, nullptr);
        sum += (ghat - t.label).squaredNorm() / static_cast<double>(t.label.size());
    }
    return sum / static_cast<double>(end - begin);
}

HighTrainResult train_high(HighStack& stack, const HighTrainOptions& opt, uint64_t seed,
                           const std::function<void(const rl::LearnCurvePoint&)>& on_episode) {
    HighEnvOptions env_opt;
    env_opt.cfg = opt.cfg;
    env_opt.consensus = stack.consensus.get();
    env_opt.low_student = opt.low_student;
    env_opt.safe_lidar = opt.safe_lidar;
    env_opt.adversary = opt.adversary;
    env_opt.adversary_policy = opt.adversary_policy;
    env_opt.label_variant = opt.label_variant;

    const int workers = std::max(1, opt.cfg.train.workers);
    std::vector<std::unique_ptr<HighLevelEnv>> envs;
    for (int w = 0; w < workers; ++w) envs.push_back(std::make_unique<HighLevelEnv>(env_opt));

    // thin non-owning adapter so the persistent envs can hand out tuples
    class Borrowed : public rl::RolloutEnv {
     public:
        explicit Borrowed(HighLevelEnv& e) : e_(e) {}
        void reset(uint64_t s) override { e_.reset(s); }
        int horizon() const override { return e_.horizon(); }
        int n_policy_agents() const override { return e_.n_policy_agents(); }
        int state_dim() const override { return e_.state_dim(); }
        int input_dim() const override { return e_.input_dim(); }
        VectorXd state() const override { return e_.state(); }
        MatrixXd observe_inputs() override { return e_.observe_inputs(); }
        double step(const MatrixXd& a) override { return e_.step(a); }
        RewardBreakdown components() const override { return e_.components(); }

     private:
        HighLevelEnv& e_;
    };
    rl::EnvFactory factory = [&envs](int w) { return std::make_unique<Borrowed>(*envs[w]); };

    rl::PpoTrainer trainer(*stack.policy, envs[0]->state_dim(), opt.cfg.train,
                           Rng::derive(seed, 0x41));
    ConsensusBuffer buffer(opt.cfg.train.consensus_buffer_capacity);
    nn::Adam cons_opt(stack.consensus_params(), opt.cfg.train.lr);
    Rng cons_rng(Rng::derive(seed, 0xC0));

    HighTrainResult out;
    int done_eps = 0;
    int iteration = 0;
    int since_consensus = 0;
    while (done_eps < opt.episodes) {
        const int batch = std::min(workers, opt.episodes - done_eps);
        rl::RolloutBuffer buf = trainer.collect(factory, batch, iteration);

        double ep_sum = 0.0;
        long ep_len = 0;
        RewardBreakdown comp_sum;
        for (const auto& rec : buf.steps) {
            ep_sum += rec.reward;
            comp_sum.task += rec.comps.task;
            comp_sum.navigation += rec.comps.navigation;
            comp_sum.evasion += rec.comps.evasion;
            comp_sum.formation += rec.comps.formation;
            ++ep_len;
            if (rec.done) {
                rl::LearnCurvePoint pt;
                pt.episode = done_eps;
                pt.mean_reward = ep_sum / ep_len;
                pt.mean_components.task = comp_sum.task / ep_len;
                pt.mean_components.navigation = comp_sum.navigation / ep_len;
                pt.mean_components.evasion = comp_sum.evasion / ep_len;
                pt.mean_components.formation = comp_sum.formation / ep_len;
                out.curve.push_back(pt);
                if (on_episode) on_episode(pt);
                ++done_eps;
                ++since_consensus;
                ep_sum = 0;
                ep_len = 0;
                comp_sum = {};
            }
        }

        trainer.update(buf);

        for (auto& env : envs) {
            for (auto& t : env->tuples()) buffer.push(std::move(t));
            env->tuples().clear();
        }

        if (since_consensus >= opt.cfg.train.consensus_every_episodes && buffer.size() > 0) {
            since_consensus = 0;
            double loss = consensus_update(*stack.consensus, cons_opt, buffer,
                                           opt.cfg.train.consensus_iters,
                                           opt.cfg.train.consensus_batch, cons_rng);
            out.consensus_losses.push_back(loss);
        }
        ++iteration;
    }
    return out;
}

}  // namespace swarm::high
