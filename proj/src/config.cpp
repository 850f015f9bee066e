#include "priocomp/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "priocomp/checkpoint.hpp"

namespace priocomp {

using nlohmann::json;

void ExperimentConfig::validate() const {
    env.validate();
    softq.validate();
    weight.validate();
    online.validate();
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir must not be empty");
}

namespace {

const char* variant_name(EnvVariant v) {
    switch (v) {
        case EnvVariant::obstacle: return "obstacle";
        case EnvVariant::goal: return "goal";
        case EnvVariant::compound: return "compound";
    }
    throw std::logic_error("variant_name: unknown variant");
}

EnvVariant variant_from_name(const std::string& s) {
    if (s == "obstacle") return EnvVariant::obstacle;
    if (s == "goal") return EnvVariant::goal;
    if (s == "compound") return EnvVariant::compound;
    throw std::runtime_error("config: unknown env variant '" + s + "'");
}

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("config: expected [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json env_to_json(const EnvConfig& cfg) {
    json rects = json::array();
    for (const Rect& r : cfg.obstacle_rects) rects.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
    return json{{"variant", variant_name(cfg.variant)},
                {"obstacle_rects", rects},
                {"goal_center", vec_to_json(cfg.goal_center)},
                {"goal_radius", cfg.goal_radius},
                {"collision_margin", cfg.collision_margin},
                {"horizon", cfg.horizon},
                {"gamma", cfg.gamma},
                {"a_max", cfg.a_max},
                {"start", vec_to_json(cfg.start)},
                {"noise_std", cfg.noise_std}};
}

EnvConfig env_from_json(const json& j) {
    EnvConfig cfg = compound_task_config();
    if (j.contains("variant")) cfg.variant = variant_from_name(j.at("variant").get<std::string>());
    if (j.contains("obstacle_rects")) {
        cfg.obstacle_rects.clear();
        for (const auto& r : j.at("obstacle_rects")) {
            if (r.size() != 4)
                throw std::runtime_error("config: obstacle rect must be [xmin,ymin,xmax,ymax]");
            cfg.obstacle_rects.push_back(
                {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()});
        }
    }
    if (j.contains("goal_center")) cfg.goal_center = vec_from_json(j.at("goal_center"));
    cfg.goal_radius = j.value("goal_radius", cfg.goal_radius);
    cfg.collision_margin = j.value("collision_margin", cfg.collision_margin);
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.a_max = j.value("a_max", cfg.a_max);
    if (j.contains("start")) cfg.start = vec_from_json(j.at("start"));
    cfg.noise_std = j.value("noise_std", cfg.noise_std);
    return cfg;
}

namespace {

json softq_to_json(const SoftQConfig& c) {
    return json{{"alpha", c.alpha},
                {"gamma", c.gamma},
                {"n_value_samples", c.n_value_samples},
                {"replay_capacity", c.replay_capacity},
                {"batch_size", c.batch_size},
                {"episodes", c.episodes},
                {"lr", c.lr},
                {"explore_uniform", c.explore_uniform},
                {"svgd_updates_per_episode", c.svgd_updates_per_episode}};
}

SoftQConfig softq_from_json(const json& j) {
    SoftQConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.gamma = j.value("gamma", c.gamma);
    c.n_value_samples = j.value("n_value_samples", c.n_value_samples);
    c.replay_capacity = j.value("replay_capacity", c.replay_capacity);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.episodes = j.value("episodes", c.episodes);
    c.lr = j.value("lr", c.lr);
    c.explore_uniform = j.value("explore_uniform", c.explore_uniform);
    c.svgd_updates_per_episode = j.value("svgd_updates_per_episode", c.svgd_updates_per_episode);
    return c;
}

json online_to_json(const OnlineConfig& c) {
    return json{{"episodes", c.episodes},
                {"batch_size", c.batch_size},
                {"lr", c.lr},
                {"init_from_q2", c.init_from_q2},
                {"constraint_epsilon", c.constraint_epsilon},
                {"eval_every", c.eval_every},
                {"alpha", c.alpha},
                {"gamma", c.gamma},
                {"n_value_samples", c.n_value_samples},
                {"eval_rollouts", c.eval_rollouts},
                {"svgd_updates_per_episode", c.svgd_updates_per_episode}};
}

OnlineConfig online_from_json(const json& j) {
    OnlineConfig c;
    c.episodes = j.value("episodes", c.episodes);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.lr = j.value("lr", c.lr);
    c.init_from_q2 = j.value("init_from_q2", c.init_from_q2);
    c.constraint_epsilon = j.value("constraint_epsilon", c.constraint_epsilon);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.alpha = j.value("alpha", c.alpha);
    c.gamma = j.value("gamma", c.gamma);
    c.n_value_samples = j.value("n_value_samples", c.n_value_samples);
    c.eval_rollouts = j.value("eval_rollouts", c.eval_rollouts);
    c.svgd_updates_per_episode = j.value("svgd_updates_per_episode", c.svgd_updates_per_episode);
    return c;
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
    return json{{"env", env_to_json(cfg.env)},
                {"softq", softq_to_json(cfg.softq)},
                {"weight", weight_params_to_json(cfg.weight)},
                {"online", online_to_json(cfg.online)},
                {"seed", cfg.seed},
                {"output_dir", cfg.output_dir}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("env")) cfg.env = env_from_json(j.at("env"));
    if (j.contains("softq")) cfg.softq = softq_from_json(j.at("softq"));
    if (j.contains("weight")) cfg.weight = weight_params_from_json(j.at("weight"));
    if (j.contains("online")) cfg.online = online_from_json(j.at("online"));
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: parse error in '" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string dump = config_to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

EnvConfig variant_config(const EnvConfig& base, EnvVariant variant) {
    EnvConfig cfg = base;
    cfg.variant = variant;
    switch (variant) {
        case EnvVariant::goal:
            cfg.obstacle_rects.clear();
            cfg.horizon = 100;
            break;
        case EnvVariant::obstacle:
            cfg.horizon = 60;
            break;
        case EnvVariant::compound:
            break;
    }
    return cfg;
}

}  // namespace priocomp
