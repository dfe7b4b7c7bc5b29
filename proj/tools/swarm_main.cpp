// Command-line front end: training, distillation, evaluation, distributed
// execution and plotting. See README.md for the workflow.
#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "swarm/adversary.hpp"
#include "swarm/harness/metrics.hpp"
#include "swarm/harness/plots.hpp"
#include "swarm/harness/rundir.hpp"
#include "swarm/harness/similarity.hpp"
#include "swarm/high/trainer.hpp"
#include "swarm/low/atm.hpp"
#include "swarm/low/distill.hpp"
#include "swarm/net/lockstep.hpp"
#include "swarm/nn/checkpoint.hpp"

using namespace swarm;

namespace {

Config load_or_default(const std::string& path, uint64_t seed_flag) {
    Config cfg;
    if (!path.empty()) {
        std::vector<std::string> defaulted;
        cfg = load_config(path, &defaulted);
        for (const auto& key : defaulted)
            std::cerr << "[config] using default for '" << key << "'\n";
    }
    if (seed_flag != 0) cfg.seed = seed_flag;
    return cfg;
}

void save_params(const std::string& path, rl::PpoPolicy& policy) {
    nn::ParamList ps;
    policy.collect_params(ps);
    nn::save_checkpoint(path, ps);
}

void load_params(const std::string& path, rl::PpoPolicy& policy) {
    nn::ParamList ps;
    policy.collect_params(ps);
    nn::load_checkpoint(path, ps);
}

std::unique_ptr<low::LowPolicy> make_teacher(const Config& cfg, int pattern, int hidden,
                                             uint64_t seed) {
    Rng rng(Rng::derive(seed, std::hash<std::string>{}("low")));
    return std::make_unique<low::LowPolicy>("low", 2 + 4 * (pattern - 1), cfg.env.lidar_rays,
                                            hidden, rng);
}

std::unique_ptr<low::LowPolicy> make_student(const Config& cfg, int slots, int hidden,
                                             uint64_t seed) {
    Rng rng(Rng::derive(seed, std::hash<std::string>{}("student")));
    return std::make_unique<low::LowPolicy>("student", 2 + 4 * slots, cfg.env.lidar_rays, hidden,
                                            rng);
}

adv::AdversaryKind parse_adversary(const std::string& s) {
    if (s == "ppo") return adv::AdversaryKind::kPpo;
    if (s == "r-nearest") return adv::AdversaryKind::kRuleNearest;
    if (s == "r-largest") return adv::AdversaryKind::kRuleLargest;
    if (s == "none") return adv::AdversaryKind::kNone;
    throw ConfigError("unknown adversary kind: " + s);
}

std::vector<double> curve_rewards(const std::vector<rl::LearnCurvePoint>& curve) {
    std::vector<double> out;
    for (const auto& p : curve) out.push_back(p.mean_reward);
    return out;
}

// Shared checkpoint flags for eval / run-distributed / agent-proc.
struct StackFlags {
    std::string low_ckpt, high_ckpt, consensus_ckpt, adversary_ckpt;
    std::string low_kind = "student";
    int pattern = 3;
    int hidden_teacher = 128, hidden_student = 256;
    std::string labels = "A";
    bool safe = false;
    std::string adversary = "none";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--low", low_ckpt, "low-level policy checkpoint");
        cmd->add_option("--low-kind", low_kind, "teacher|student")
            ->check(CLI::IsMember({"teacher", "student"}));
        cmd->add_option("--pattern", pattern, "pattern size for teacher checkpoints");
        cmd->add_option("--teacher-hidden", hidden_teacher, "teacher hidden width");
        cmd->add_option("--student-hidden", hidden_student, "student hidden width");
        cmd->add_option("--high", high_ckpt, "anchor selector checkpoint");
        cmd->add_option("--consensus", consensus_ckpt, "consensus module checkpoint");
        cmd->add_option("--labels", labels, "consensus label variant A|O")
            ->check(CLI::IsMember({"A", "O"}));
        cmd->add_flag("--safe", safe, "conservative lidar offset at execution");
        cmd->add_option("--adversary", adversary, "none|ppo|r-nearest|r-largest");
        cmd->add_option("--adversary-ckpt", adversary_ckpt, "trained adversary checkpoint");
    }
};

struct LoadedStack {
    std::unique_ptr<low::LowPolicy> low;
    std::unique_ptr<high::HighPolicy> selector;
    std::unique_ptr<high::ConsensusModule> consensus;
    std::unique_ptr<low::LowPolicy> adversary;
    harness::AgentCore::Options core;
    adv::AdversaryKind adv_kind = adv::AdversaryKind::kNone;
};

LoadedStack load_stack(const Config& cfg, const StackFlags& f) {
    LoadedStack s;
    s.core.decision_interval = cfg.env.decision_interval;
    s.core.accel_max = cfg.env.accel_max;
    s.core.lidar_cap = cfg.env.obs_range;
    s.core.n_targets = cfg.env.n_targets;
    s.core.safe_lidar = f.safe;

    if (!f.low_ckpt.empty()) {
        if (f.low_kind == "teacher") {
            s.low = make_teacher(cfg, f.pattern, f.hidden_teacher, 1);
            s.core.student_slots = f.pattern - 1;
        } else {
            s.low = make_student(cfg, 7, f.hidden_student, 1);
            s.core.student_slots = 7;
        }
        load_params(f.low_ckpt, *s.low);
        s.core.low = s.low.get();
    }
    if (!f.consensus_ckpt.empty() || !f.high_ckpt.empty()) {
        high::HighStack hs = high::HighStack::make(cfg.env, f.labels[0], 1);
        s.consensus = std::move(hs.consensus);
        s.selector = std::move(hs.policy);
        if (!f.consensus_ckpt.empty()) {
            nn::ParamList ps;
            s.consensus->collect_params(ps);
            nn::load_checkpoint(f.consensus_ckpt, ps);
        }
        s.core.consensus = s.consensus.get();
        if (!f.high_ckpt.empty()) {
            load_params(f.high_ckpt, *s.selector);
            s.core.selector = s.selector.get();
        }
    }
    s.adv_kind = parse_adversary(f.adversary);
    if (s.adv_kind == adv::AdversaryKind::kPpo) {
        s.adversary = adv::make_adversary_policy(cfg.env, 1);
        if (f.adversary_ckpt.empty())
            throw ConfigError("--adversary ppo requires --adversary-ckpt");
        load_params(f.adversary_ckpt, *s.adversary);
    }
    return s;
}

std::string self_path() {
    char buf[4096];
    ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) throw ContractError("cannot resolve own binary path");
    buf[n] = '\0';
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pursuit-evasion formation swarm: training and evaluation"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out/run";
    uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config file")->capture_default_str();
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();

    // ---- train-low ----
    auto* tl = app.add_subcommand("train-low", "three-stage low-level training for one pattern");
    int tl_pattern = 3, tl_hidden = 128;
    int tl_ep1 = -1, tl_ep2 = -1, tl_ep3 = -1;
    bool tl_skip = false;
    tl->add_option("--pattern", tl_pattern, "formation size c")->check(CLI::Range(3, 8));
    tl->add_option("--episodes1", tl_ep1);
    tl->add_option("--episodes2", tl_ep2);
    tl->add_option("--episodes3", tl_ep3);
    tl->add_flag("--skip-recombine", tl_skip, "fine-tune the obstacle policy directly");
    tl->add_option("--hidden", tl_hidden);

    // ---- distill ----
    auto* ds = app.add_subcommand("distill", "merge pattern teachers into one student");
    std::string ds_teachers;
    std::vector<int> ds_patterns{3, 4, 5, 6, 7, 8};
    int ds_hidden = 256;
    ds->add_option("--teachers", ds_teachers, "directory with low_c<k>.ckpt files")->required();
    ds->add_option("--patterns", ds_patterns, "pattern sizes to distill");
    ds->add_option("--hidden", ds_hidden);

    // ---- train-adversary ----
    auto* ta = app.add_subcommand("train-adversary", "PPO pursuer against scripted evaders");

    // ---- train-high ----
    auto* th = app.add_subcommand("train-high", "selector + consensus training");
    std::string th_phase = "pretrain", th_labels = "A", th_low, th_resume;
    std::string th_adv = "r-nearest", th_adv_ckpt;
    int th_hidden_student = 256;
    th->add_option("--phase", th_phase)->check(CLI::IsMember({"pretrain", "finetune"}));
    th->add_option("--labels", th_labels)->check(CLI::IsMember({"A", "O"}));
    th->add_option("--low", th_low, "student checkpoint (finetune phase)");
    th->add_option("--resume", th_resume, "run dir with consensus/selector checkpoints");
    th->add_option("--adversary", th_adv);
    th->add_option("--adversary-ckpt", th_adv_ckpt);
    th->add_option("--student-hidden", th_hidden_student);

    // ---- eval ----
    auto* ev = app.add_subcommand("eval", "run episodes, write metrics/trajectories/plots");
    std::string ev_mode = "high";
    int ev_episodes = 50;
    bool ev_stochastic = false;
    StackFlags ev_stack;
    ev->add_option("--mode", ev_mode)->check(CLI::IsMember({"low", "high"}));
    ev->add_option("--episodes", ev_episodes);
    ev->add_flag("--stochastic", ev_stochastic, "sample actions instead of means");
    ev_stack.add_to(ev);

    // ---- run-distributed ----
    auto* rd = app.add_subcommand("run-distributed", "one process per agent over datagrams");
    std::string rd_mode = "lockstep";
    int rd_agents = 0, rd_port = 47800, rd_tick = 50, rd_steps = 0;
    std::vector<int> rd_delays;
    StackFlags rd_stack;
    rd->add_option("--mode", rd_mode)->check(CLI::IsMember({"lockstep", "async"}));
    rd->add_option("--agents", rd_agents, "override agent count");
    rd->add_option("--base-port", rd_port);
    rd->add_option("--tick-ms", rd_tick);
    rd->add_option("--delay-ms", rd_delays, "per-agent decision delays (async)");
    rd->add_option("--steps", rd_steps, "override episode steps");
    rd_stack.add_to(rd);

    // ---- agent-proc (spawned by run-distributed) ----
    auto* ap = app.add_subcommand("agent-proc", "internal: one distributed agent");
    int ap_id = 0, ap_port = 47800, ap_delay = 0;
    StackFlags ap_stack;
    ap->add_option("--id", ap_id)->required();
    ap->add_option("--base-port", ap_port);
    ap->add_option("--delay-ms", ap_delay);
    ap_stack.add_to(ap);

    // ---- plot ----
    auto* pl = app.add_subcommand("plot", "regenerate SVG plots from run logs");
    std::string pl_run;
    pl->add_option("--run", pl_run, "run directory")->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_or_default(config_path, seed);

        if (tl->parsed()) {
            cfg.env.n_agents = tl_pattern;
            auto rundir = harness::RunDir::create(out_dir);
            std::ofstream(rundir.file("config.json")) << config_to_json(cfg);
            low::AtmOptions opt;
            opt.cfg = cfg;
            opt.hidden = tl_hidden;
            opt.skip_recombine = tl_skip;
            if (tl_ep1 > 0) opt.episodes1 = tl_ep1;
            else opt.episodes1 = cfg.train.episodes;
            opt.episodes2 = tl_ep2 > 0 ? tl_ep2 : cfg.train.episodes;
            opt.episodes3 = tl_ep3 > 0 ? tl_ep3 : cfg.train.episodes;
            auto res = low::atm_train(opt, cfg.seed, [&](const std::string& stage,
                                                         const rl::LearnCurvePoint& p) {
                if (p.episode % 10 == 0)
                    std::cout << stage << " episode " << p.episode << " mean_R "
                              << p.mean_reward << "\n";
            });
            rundir.ensure_subdir("checkpoints");
            save_params(rundir.file("checkpoints/low_step1.ckpt"), *res.policy_step1);
            save_params(rundir.file("checkpoints/low_step2.ckpt"), *res.policy_step2);
            save_params(rundir.file("checkpoints/low_c" + std::to_string(tl_pattern) + ".ckpt"),
                        *res.policy_final);
            harness::write_learning_curve(rundir.file("curve_step1.jsonl"), res.curve1);
            harness::write_learning_curve(rundir.file("curve_step2.jsonl"), res.curve2);
            harness::write_learning_curve(rundir.file("curve_step3.jsonl"), res.curve3);
            harness::svg_line_chart(rundir.file("learning_curve.svg"),
                                    "mean episode reward (pattern " + std::to_string(tl_pattern) +
                                        ")",
                                    {{"step1", curve_rewards(res.curve1)},
                                     {"step2", curve_rewards(res.curve2)},
                                     {"step3", curve_rewards(res.curve3)}});
            std::cout << "wrote " << rundir.root << "\n";
        } else if (ds->parsed()) {
            auto rundir = harness::RunDir::create(out_dir);
            std::ofstream(rundir.file("config.json")) << config_to_json(cfg);
            low::DistillBuffer buffer(cfg.train.distill_steps * ds_patterns.size());
            for (int c : ds_patterns) {
                Config tcfg = cfg;
                tcfg.env.n_agents = c;
                auto teacher = make_teacher(tcfg, c, 128, 1);
                load_params(ds_teachers + "/low_c" + std::to_string(c) + ".ckpt", *teacher);
                low::LowEnvOptions env_opt;
                env_opt.cfg = tcfg;
                env_opt.obstacle_density = tcfg.env.obstacle_density;
                low::collect_teacher_tuples(*teacher, c, env_opt, cfg.train.distill_steps, 7,
                                            Rng::derive(cfg.seed, c), buffer);
                std::cout << "pattern " << c << ": buffer now " << buffer.size() << " tuples\n";
            }
            rundir.ensure_subdir("checkpoints");
            buffer.save(rundir.file("checkpoints/distill_buffer.bin"));
            auto student = make_student(cfg, 7, ds_hidden, cfg.seed);
            auto report = low::distill(*student, buffer, cfg.train.distill_epochs,
                                       cfg.train.distill_batch, cfg.train.distill_lr, cfg.seed);
            save_params(rundir.file("checkpoints/student.ckpt"), *student);
            {
                std::ofstream out(rundir.file("distill_loss.jsonl"));
                for (size_t i = 0; i < report.loss_curve.size(); ++i)
                    out << "{\"epoch\":" << i << ",\"loss\":"
                        << harness::format_double(report.loss_curve[i]) << "}\n";
            }
            harness::svg_line_chart(rundir.file("distill_loss.svg"), "distillation loss",
                                    {{"mse", report.loss_curve}});
            std::cout << "final loss " << report.loss_curve.back() << "\n";
        } else if (ta->parsed()) {
            auto rundir = harness::RunDir::create(out_dir);
            std::ofstream(rundir.file("config.json")) << config_to_json(cfg);
            auto res = adv::train_adversary(cfg, cfg.train.episodes, cfg.seed,
                                            [&](const rl::LearnCurvePoint& p) {
                                                if (p.episode % 10 == 0)
                                                    std::cout << "episode " << p.episode
                                                              << " mean_R " << p.mean_reward
                                                              << "\n";
                                            });
            rundir.ensure_subdir("checkpoints");
            save_params(rundir.file("checkpoints/adversary.ckpt"), *res.policy);
            harness::write_learning_curve(rundir.file("curve.jsonl"), res.curve);
            harness::svg_line_chart(rundir.file("learning_curve.svg"), "adversary mean reward",
                                    {{"reward", curve_rewards(res.curve)}});
        } else if (th->parsed()) {
            auto rundir = harness::RunDir::create(out_dir);
            std::ofstream(rundir.file("config.json")) << config_to_json(cfg);
            high::HighStack stack = high::HighStack::make(cfg.env, th_labels[0], cfg.seed);
            if (!th_resume.empty()) {
                nn::ParamList cp = stack.consensus_params();
                nn::load_checkpoint(th_resume + "/checkpoints/consensus.ckpt", cp);
                nn::ParamList pp = stack.policy_params();
                nn::load_checkpoint(th_resume + "/checkpoints/selector.ckpt", pp);
            }
            high::HighTrainOptions opt;
            opt.cfg = cfg;
            opt.episodes = cfg.train.episodes;
            opt.label_variant = th_labels[0];
            opt.adversary = parse_adversary(th_adv);
            std::unique_ptr<low::LowPolicy> adv_policy;
            if (opt.adversary == adv::AdversaryKind::kPpo) {
                adv_policy = adv::make_adversary_policy(cfg.env, 1);
                load_params(th_adv_ckpt, *adv_policy);
                opt.adversary_policy = adv_policy.get();
            }
            std::unique_ptr<low::LowPolicy> student;
            if (th_phase == "finetune") {
                if (th_low.empty()) throw ConfigError("finetune phase needs --low");
                student = make_student(cfg, 7, th_hidden_student, 1);
                load_params(th_low, *student);
                opt.low_student = student.get();
            }
            auto res = high::train_high(stack, opt, cfg.seed, [&](const rl::LearnCurvePoint& p) {
                if (p.episode % 10 == 0)
                    std::cout << "episode " << p.episode << " mean_R " << p.mean_reward << "\n";
            });
            rundir.ensure_subdir("checkpoints");
            {
                nn::ParamList cp = stack.consensus_params();
                nn::save_checkpoint(rundir.file("checkpoints/consensus.ckpt"), cp);
                nn::ParamList pp = stack.policy_params();
                nn::save_checkpoint(rundir.file("checkpoints/selector.ckpt"), pp);
            }
            harness::write_learning_curve(rundir.file("curve.jsonl"), res.curve);
            harness::svg_line_chart(rundir.file("learning_curve.svg"),
                                    "high-level mean reward (" + th_phase + ")",
                                    {{"reward", curve_rewards(res.curve)}});
            {
                std::ofstream out(rundir.file("consensus_loss.jsonl"));
                for (size_t i = 0; i < res.consensus_losses.size(); ++i)
                    out << "{\"phase\":" << i << ",\"loss\":"
                        << harness::format_double(res.consensus_losses[i]) << "}\n";
            }
        } else if (ev->parsed()) {
            auto rundir = harness::RunDir::create(out_dir);
            std::ofstream(rundir.file("config.json")) << config_to_json(cfg);
            LoadedStack stack = load_stack(cfg, ev_stack);

            harness::EpisodeOptions ep;
            ep.cfg = cfg;
            ep.adversary = stack.adv_kind;
            ep.adversary_policy = stack.adversary.get();
            if (ev_mode == "low") {
                ep.cfg.env.n_targets = 0;
                ep.cfg.env.has_adversary = false;
                ep.adversary = adv::AdversaryKind::kNone;
            }
            std::vector<harness::MetricsRecord> metrics;
            Rng anchor_rng(Rng::derive(cfg.seed, 0xA7C4));
            for (int e = 0; e < ev_episodes; ++e) {
                if (ev_mode == "low") {
                    double r = cfg.env.anchor_range;
                    ep.fixed_anchor = Vec2{anchor_rng.uniform(-r, r), anchor_rng.uniform(-r, r)};
                }
                harness::AgentCore::Options core = stack.core;
                if (ev_mode == "low") {
                    core.consensus = nullptr;
                    core.selector = nullptr;
                    core.fixed_anchor = ep.fixed_anchor;
                    core.n_targets = 0;
                }
                Rng sample_rng(Rng::derive(cfg.seed, 0x5E, e));
                harness::LocalProvider provider(core, ep.cfg.env.n_agents,
                                                ev_stochastic ? &sample_rng : nullptr);
                auto traj = harness::run_episode(ep, provider, Rng::derive(cfg.seed, 0xE9, e));
                metrics.push_back(harness::compute_metrics(traj));
                if (e == 0) {
                    harness::write_trajectory(rundir.file("trajectory.jsonl"), traj);
                    if (ev_mode == "high") {
                        harness::write_message_log(rundir.file("messages.log"), traj);
                        std::vector<std::vector<nn::VectorXd>> log;
                        for (const auto& s : traj.steps) log.push_back(s.messages);
                        auto sims = harness::similarity_analysis(log, cfg.env.decision_interval);
                        rundir.ensure_subdir("plots");
                        for (size_t k = 0; k < sims.size(); k += 10)
                            harness::svg_heatmap(rundir.file("plots/similarity_step" +
                                                             std::to_string(k * cfg.env.decision_interval) +
                                                             ".svg"),
                                                 "message cosine similarity", sims[k]);
                    }
                }
            }
            harness::write_metrics_csv(rundir.file("metrics.csv"), metrics);
            double f = 0, na = 0, nt = 0, c = 0, e_steps = 0;
            for (const auto& m : metrics) {
                f += m.f_steps;
                na += m.n_anchor_steps;
                nt += m.n_target_steps;
                c += m.c_percent;
                e_steps += m.e_steps;
            }
            double n = static_cast<double>(metrics.size());
            harness::svg_bar_chart(rundir.file("metrics.svg"), "episode means",
                                   {"F", "N_anchor", "N_target", "C%", "E"},
                                   {f / n, na / n, nt / n, c / n, e_steps / n});
            std::cout << "mean F " << f / n << " N_anchor " << na / n << " N_target " << nt / n
                      << " C% " << c / n << " E " << e_steps / n << "\n";
        } else if (rd->parsed()) {
            auto rundir = harness::RunDir::create(out_dir);
            Config rcfg = cfg;
            if (rd_agents > 0) rcfg.env.n_agents = rd_agents;
            if (rd_steps > 0) rcfg.env.episode_steps = rd_steps;
            std::ofstream(rundir.file("config.json")) << config_to_json(rcfg);
            LoadedStack stack = load_stack(rcfg, rd_stack);

            net::DistributedOptions opt;
            opt.cfg = rcfg;
            opt.base_port = rd_port;
            opt.agent_binary = self_path();
            opt.async_mode = (rd_mode == "async");
            opt.tick_ms = rd_tick;
            opt.delay_ms = rd_delays;
            opt.adversary = stack.adv_kind;
            opt.adversary_policy = stack.adversary.get();
            // forward the stack flags to the agent processes
            std::vector<std::string> extra;
            if (!config_path.empty()) {
                extra.push_back("--config");
                extra.push_back(std::filesystem::absolute(config_path).string());
            }
            auto fwd = [&extra](const std::string& flag, const std::string& v) {
                if (!v.empty()) {
                    extra.push_back(flag);
                    extra.push_back(std::filesystem::absolute(v).string());
                }
            };
            fwd("--low", rd_stack.low_ckpt);
            fwd("--high", rd_stack.high_ckpt);
            fwd("--consensus", rd_stack.consensus_ckpt);
            extra.push_back("--low-kind");
            extra.push_back(rd_stack.low_kind);
            extra.push_back("--pattern");
            extra.push_back(std::to_string(rd_stack.pattern));
            extra.push_back("--labels");
            extra.push_back(rd_stack.labels);
            if (rd_stack.safe) extra.push_back("--safe");
            opt.agent_extra_args = extra;

            auto res = net::run_distributed(opt, rcfg.seed);
            harness::write_trajectory(rundir.file("trajectory.jsonl"), res.trajectory);
            auto m = harness::compute_metrics(res.trajectory);
            harness::write_metrics_csv(rundir.file("metrics.csv"), {m});
            std::cout << "steps " << res.trajectory.steps.size() << " resends " << res.resends
                      << " dropped " << res.dropped_packets << "\n";
        } else if (ap->parsed()) {
            LoadedStack stack = load_stack(cfg, ap_stack);
            net::AgentProcOptions opt;
            opt.id = ap_id;
            opt.base_port = ap_port;
            opt.delay_ms = ap_delay;
            opt.stack = stack.core;
            return net::agent_proc_main(opt);
        } else if (pl->parsed()) {
            // learning curve
            std::ifstream curve(pl_run + "/curve.jsonl");
            if (curve) {
                std::vector<double> rewards;
                std::string line;
                while (std::getline(curve, line)) {
                    auto j = nlohmann::json::parse(line);
                    rewards.push_back(j.value("mean_reward", 0.0));
                }
                harness::svg_line_chart(pl_run + "/learning_curve.svg", "mean episode reward",
                                        {{"reward", rewards}});
                std::cout << "learning_curve.svg (" << rewards.size() << " episodes)\n";
            }
            std::ifstream msgs(pl_run + "/messages.log");
            if (msgs) {
                std::map<int, std::vector<nn::VectorXd>> by_step;
                int step, id;
                while (msgs >> step >> id) {
                    std::vector<double> vals;
                    double v;
                    while (msgs.peek() == ' ' && msgs >> v) vals.push_back(v);
                    nn::VectorXd m = Eigen::Map<nn::VectorXd>(vals.data(), vals.size());
                    by_step[step].push_back(m);
                }
                harness::RunDir rd2{pl_run};
                rd2.ensure_subdir("plots");
                int count = 0;
                for (const auto& [s, mlist] : by_step) {
                    if (s % 100 != 0) continue;
                    harness::svg_heatmap(pl_run + "/plots/similarity_step" + std::to_string(s) +
                                             ".svg",
                                         "message cosine similarity",
                                         harness::cosine_matrix(mlist));
                    ++count;
                }
                std::cout << count << " similarity heatmaps\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
