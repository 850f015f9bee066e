#include "priocomp/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>

#include "priocomp/checkpoint.hpp"
#include "priocomp/csv.hpp"
#include "priocomp/log.hpp"
#include "priocomp/online.hpp"
#include "priocomp/render.hpp"

namespace priocomp {

namespace fs = std::filesystem;

namespace {

constexpr int kComposeSvgdUpdates = 2000;

const char* variant_tag(EnvVariant v) {
    return v == EnvVariant::goal ? "goal" : v == EnvVariant::obstacle ? "obstacle" : "compound";
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    return fs::path(cfg.output_dir) / name;
}

void ensure_output_dir(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.output_dir);
}

void write_train_metrics(const fs::path& path, const std::vector<EpisodeMetrics>& metrics) {
    CsvWriter csv(path, "episode,mean_return_r1,mean_return_r2,collisions,td_loss");
    for (const EpisodeMetrics& m : metrics)
        csv.row(std::to_string(m.episode) + "," + fmt_num(m.return_r1) + "," +
                fmt_num(m.return_r2) + "," + std::to_string(m.collisions) + "," +
                fmt_num(m.td_loss));
}

void write_constraint_reports(const fs::path& path, const std::vector<ConstraintReport>& reports) {
    CsvWriter csv(path,
                  "episode,return_r1_compound,return_r1_reference,gap,collisions,goal_reach_rate");
    for (const ConstraintReport& r : reports)
        csv.row(std::to_string(r.episode) + "," + fmt_num(r.return_r1_compound) + "," +
                fmt_num(r.return_r1_reference) + "," + fmt_num(r.gap) + "," +
                std::to_string(r.collisions) + "," + fmt_num(r.goal_reach_rate));
}

WeightParams load_weight_params(const ExperimentConfig& cfg) {
    const fs::path p = out_path(cfg, "weight_params.json");
    if (fs::exists(p)) {
        std::ifstream in(p);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("weight_params: parse error in '" + p.string() +
                                     "': " + e.what());
        }
        log_info("using calibrated weight params from " + p.string());
        return weight_params_from_json(j);
    }
    return cfg.weight;
}

}  // namespace

void cmd_train(const ExperimentConfig& cfg, EnvVariant variant) {
    if (variant == EnvVariant::compound)
        throw std::invalid_argument("train: pick --variant goal or --variant obstacle");
    ensure_output_dir(cfg);
    const EnvConfig env = variant_config(cfg.env, variant);
    const std::string tag = variant_tag(variant);
    log_info("training " + tag + " task, " + std::to_string(cfg.softq.episodes) + " episodes");
    const std::uint64_t seed =
        derive_seed(cfg.seed, variant == EnvVariant::goal ? 1 : 2);
    TaskTrainResult res = train_task(env, cfg.softq, seed);
    const std::string hash = config_hash(cfg);
    save_checkpoint(out_path(cfg, "q_" + tag + ".json"), make_qnet_checkpoint(res.q, hash));
    save_checkpoint(out_path(cfg, "sampler_" + tag + ".json"),
                    make_sampler_checkpoint(res.sampler, hash));
    write_train_metrics(out_path(cfg, "train_" + tag + ".csv"), res.metrics);
}

void cmd_calibrate(const ExperimentConfig& cfg) {
    ensure_output_dir(cfg);
    const RbfQNet q_high = qnet_from_checkpoint(load_checkpoint(out_path(cfg, "q_obstacle.json")));
    const std::vector<Vec2> probes = default_probe_states(cfg.env);
    log_info("calibrating weight params over " + std::to_string(probes.size()) + " probe states");
    const CalibrationResult res =
        calibrate(q_high, cfg.weight, probes, cfg.weight.epsilon, cfg.env.a_max);
    if (!res.feasible)
        log_error("calibration: no grid point met the budget; most restrictive corner written");
    nlohmann::json j = weight_params_to_json(res.params);
    j["feasible"] = res.feasible;
    std::ofstream out(out_path(cfg, "weight_params.json"));
    out << j.dump(1) << "\n";
    CsvWriter csv(out_path(cfg, "calibration_report.csv"),
                  "l,mu,temp,mean_weight,worst_loss,feasible");
    for (const CalibrationRow& r : res.report)
        csv.row(fmt_num(r.l) + "," + fmt_num(r.mu) + "," + fmt_num(r.temp) + "," +
                fmt_num(r.mean_weight) + "," + fmt_num(r.worst_loss) + "," +
                (r.feasible ? "1" : "0"));
}

void cmd_compose(const ExperimentConfig& cfg) {
    ensure_output_dir(cfg);
    RbfQNet q_high = qnet_from_checkpoint(load_checkpoint(out_path(cfg, "q_obstacle.json")));
    RbfQNet q_low = qnet_from_checkpoint(load_checkpoint(out_path(cfg, "q_goal.json")));
    const WeightParams params = load_weight_params(cfg);
    CompoundQ cq(std::move(q_high), std::move(q_low), params);

    SamplerNet sampler = SamplerNet::init(cfg.env.a_max, 64, derive_seed(cfg.seed, 3));
    SvgdConfig svgd;
    svgd.alpha = cfg.softq.alpha;
    svgd.lr = cfg.softq.sampler_lr;
    svgd.n_particles = cfg.softq.sampler_particles;
    Rng rng(derive_seed(cfg.seed, 0x30));
    std::vector<Vec2> states(16);
    log_info("training zero-shot compound sampler");
    for (int k = 0; k < kComposeSvgdUpdates; ++k) {
        for (Vec2& s : states) s = {rng.uniform(), rng.uniform()};
        svgd_update(sampler, cq, states, svgd, rng);
    }
    const std::string hash = config_hash(cfg);
    save_checkpoint(out_path(cfg, "compound.json"), make_compound_checkpoint(cq, hash));
    save_checkpoint(out_path(cfg, "sampler_compound.json"),
                    make_sampler_checkpoint(sampler, hash));
}

void cmd_explore(const ExperimentConfig& cfg) {
    ensure_output_dir(cfg);
    const CompoundQ zero_shot =
        compound_from_checkpoint(load_checkpoint(out_path(cfg, "compound.json")));
    const SamplerNet pi1_sampler =
        sampler_from_checkpoint(load_checkpoint(out_path(cfg, "sampler_obstacle.json")));
    SamplerNet init_sampler =
        sampler_from_checkpoint(load_checkpoint(out_path(cfg, "sampler_compound.json")));

    log_info("online indifference-space training, " + std::to_string(cfg.online.episodes) +
             " episodes");
    OnlineResult res =
        train_online(zero_shot.q_high(), zero_shot.q_low(), cfg.env, zero_shot.params(),
                     cfg.online, pi1_sampler, derive_seed(cfg.seed, 4), &init_sampler);
    const std::string hash = config_hash(cfg);
    save_checkpoint(out_path(cfg, "compound_trained.json"),
                    make_compound_checkpoint(res.cq, hash));
    save_checkpoint(out_path(cfg, "sampler_compound_trained.json"),
                    make_sampler_checkpoint(res.sampler, hash));
    write_constraint_reports(out_path(cfg, "constraint_reports.csv"), res.reports);
    log_info("training collisions: " + std::to_string(res.total_train_collisions));
}

void cmd_eval(const ExperimentConfig& cfg) {
    ensure_output_dir(cfg);
    const bool trained = fs::exists(out_path(cfg, "compound_trained.json"));
    const std::string cq_file = trained ? "compound_trained.json" : "compound.json";
    const std::string sm_file = trained ? "sampler_compound_trained.json" : "sampler_compound.json";
    const CompoundQ cq = compound_from_checkpoint(load_checkpoint(out_path(cfg, cq_file)));
    const SamplerNet sampler = sampler_from_checkpoint(load_checkpoint(out_path(cfg, sm_file)));
    const SamplerNet pi1_sampler =
        sampler_from_checkpoint(load_checkpoint(out_path(cfg, "sampler_obstacle.json")));
    log_info("evaluating " + cq_file);
    const ConstraintReport rep = constraint_monitor(cq, sampler, pi1_sampler, cfg.env, 100,
                                                    derive_seed(cfg.seed, 5));
    write_constraint_reports(out_path(cfg, "eval_report.csv"), {rep});
}

void cmd_render(const ExperimentConfig& cfg, int grid_n) {
    ensure_output_dir(cfg);
    const bool trained = fs::exists(out_path(cfg, "compound_trained.json"));
    const std::string cq_file = trained ? "compound_trained.json" : "compound.json";
    const std::string sm_file = trained ? "sampler_compound_trained.json" : "sampler_compound.json";
    const CompoundQ cq = compound_from_checkpoint(load_checkpoint(out_path(cfg, cq_file)));
    const SamplerNet sampler = sampler_from_checkpoint(load_checkpoint(out_path(cfg, sm_file)));

    const std::vector<FieldPoint> field =
        policy_field(sampler, &cq, cfg.env, grid_n, derive_seed(cfg.seed, 6));
    std::vector<Trajectory> trajectories;
    const Policy policy = policy_from_sampler(sampler);
    for (int k = 0; k < 4; ++k)
        trajectories.push_back(rollout(policy, cfg.env, derive_seed(cfg.seed, 60 + k)));

    write_vector_field_csv(out_path(cfg, "vector_field.csv"), field);
    write_trajectories_csv(out_path(cfg, "trajectories.csv"), trajectories);
    write_scene_svg(out_path(cfg, "scene.svg"), cfg.env, field, trajectories);
}

int cli_run(int argc, const char* const* argv) {
    CLI::App app{"Task-prioritized composition of max-entropy policies"};
    app.require_subcommand(1);

    std::string config_path;
    std::string variant_name;
    std::string out_override;
    std::int64_t seed_override = -1;
    int grid_n = 20;

    auto add_common = [&](CLI::App* sub, bool with_variant, bool with_grid) {
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--out", out_override, "override the config output_dir");
        if (with_variant)
            sub->add_option("--variant", variant_name, "task variant: goal|obstacle|compound");
        if (with_grid) sub->add_option("--grid", grid_n, "state-grid resolution for renders");
    };

    CLI::App* train = app.add_subcommand("train", "train one constituent task");
    CLI::App* compose = app.add_subcommand("compose", "build the zero-shot compound policy");
    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "tune the indifference weight");
    CLI::App* explore = app.add_subcommand("explore", "online indifference-space training");
    CLI::App* eval_cmd = app.add_subcommand("eval", "paired constraint evaluation");
    CLI::App* render = app.add_subcommand("render", "emit plot data and scene svg");
    add_common(train, true, false);
    add_common(compose, false, false);
    add_common(calibrate_cmd, false, false);
    add_common(explore, false, false);
    add_common(eval_cmd, false, false);
    add_common(render, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_override.empty()) cfg.output_dir = out_override;

        if (train->parsed()) {
            EnvVariant v;
            if (variant_name == "goal")
                v = EnvVariant::goal;
            else if (variant_name == "obstacle")
                v = EnvVariant::obstacle;
            else if (variant_name.empty()) {
                std::cerr << "error: train requires --variant goal|obstacle\n";
                return 2;
            } else if (variant_name == "compound") {
                std::cerr << "error: constituent training covers single tasks only\n";
                return 2;
            } else {
                std::cerr << "error: unknown variant '" << variant_name << "'\n";
                return 2;
            }
            cmd_train(cfg, v);
        } else if (compose->parsed()) {
            cmd_compose(cfg);
        } else if (calibrate_cmd->parsed()) {
            cmd_calibrate(cfg);
        } else if (explore->parsed()) {
            cmd_explore(cfg);
        } else if (eval_cmd->parsed()) {
            cmd_eval(cfg);
        } else if (render->parsed()) {
            cmd_render(cfg, grid_n);
        }
    } catch (const std::exception& e) {
        log_error(e.what());
        return 1;
    }
    return 0;
}

}  // namespace priocomp
