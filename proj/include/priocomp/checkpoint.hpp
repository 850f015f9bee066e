#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "priocomp/indifference.hpp"
#include "priocomp/sampler.hpp"

namespace priocomp {

inline constexpr const char* kCheckpointVersion = "prio-compose.checkpoint.v1";

/// On-disk artifact: a Q-net, a sampler, or a compound pair. Round-trips are
/// lossless on parameters (doubles serialize in shortest round-trip form).
struct Checkpoint {
    std::string kind;  // q_net | sampler | compound
    std::string version = kCheckpointVersion;
    std::string config_hash;
    nlohmann::json payload;
};

nlohmann::json qnet_to_json(const RbfQNet& net);
RbfQNet qnet_from_json(const nlohmann::json& j);

nlohmann::json sampler_to_json(const SamplerNet& net);
SamplerNet sampler_from_json(const nlohmann::json& j);

nlohmann::json weight_params_to_json(const WeightParams& p);
WeightParams weight_params_from_json(const nlohmann::json& j);

Checkpoint make_qnet_checkpoint(const RbfQNet& net, const std::string& config_hash);
Checkpoint make_sampler_checkpoint(const SamplerNet& net, const std::string& config_hash);
Checkpoint make_compound_checkpoint(const CompoundQ& cq, const std::string& config_hash);

RbfQNet qnet_from_checkpoint(const Checkpoint& c);
SamplerNet sampler_from_checkpoint(const Checkpoint& c);
CompoundQ compound_from_checkpoint(const Checkpoint& c);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);

/// Throws std::runtime_error on unreadable files, version mismatches (both
/// versions quoted) and unknown kinds; JSON errors name the offending key.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace priocomp
