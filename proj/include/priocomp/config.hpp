#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "priocomp/env.hpp"
#include "priocomp/indifference.hpp"
#include "priocomp/online.hpp"
#include "priocomp/softq.hpp"

namespace priocomp {

/// Everything one experiment needs. JSON blocks are sparse: absent keys keep
/// their defaults (the U-maze scenario).
struct ExperimentConfig {
    EnvConfig env = compound_task_config();
    SoftQConfig softq;
    WeightParams weight;
    OnlineConfig online;
    std::uint64_t seed = 7;
    std::string output_dir = "out";

    void validate() const;
};

nlohmann::json env_to_json(const EnvConfig& cfg);
EnvConfig env_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Constituent-task view of the compound scenario: same geometry and
/// physics, variant-specific rectangles, horizon and start distribution.
EnvConfig variant_config(const EnvConfig& base, EnvVariant variant);

}  // namespace priocomp
