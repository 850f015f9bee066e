#include "priocomp/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

namespace priocomp {

using nlohmann::json;

json qnet_to_json(const RbfQNet& net) {
    json centers = json::array();
    for (const auto& c : net.centers()) centers.push_back({c[0], c[1], c[2], c[3]});
    return json{{"centers", centers}, {"weights", net.weights()}, {"bandwidth", net.bandwidth()}};
}

RbfQNet qnet_from_json(const json& j) {
    std::vector<RbfQNet::Center> centers;
    for (const auto& c : j.at("centers")) {
        if (c.size() != 4) throw std::runtime_error("checkpoint: center must have 4 coordinates");
        centers.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>(),
                           c[3].get<double>()});
    }
    return RbfQNet(std::move(centers), j.at("weights").get<std::vector<double>>(),
                   j.at("bandwidth").get<double>());
}

json sampler_to_json(const SamplerNet& net) {
    return json{{"hidden", net.hidden}, {"a_max", net.a_max}, {"w1", net.w1},
                {"b1", net.b1},         {"w2", net.w2},       {"b2", net.b2}};
}

SamplerNet sampler_from_json(const json& j) {
    SamplerNet net;
    net.hidden = j.at("hidden").get<int>();
    net.a_max = j.at("a_max").get<double>();
    net.w1 = j.at("w1").get<std::vector<double>>();
    net.b1 = j.at("b1").get<std::vector<double>>();
    net.w2 = j.at("w2").get<std::vector<double>>();
    net.b2 = j.at("b2").get<std::vector<double>>();
    const auto h = static_cast<std::size_t>(net.hidden);
    if (net.w1.size() != h * 4 || net.b1.size() != h || net.w2.size() != 2 * h ||
        net.b2.size() != 2)
        throw std::runtime_error("checkpoint: sampler layer sizes are inconsistent");
    return net;
}

json weight_params_to_json(const WeightParams& p) {
    return json{{"sigma", p.sigma},
                {"l", p.l},
                {"mu", p.mu},
                {"temp", p.temp},
                {"k_b", p.k_b},
                {"hessian_mode",
                 p.hessian_mode == HessianMode::signed_eigen ? "signed_eigen" : "paper_literal_norm"},
                {"matrix_norm", p.matrix_norm == MatrixNorm::spectral ? "spectral" : "infinity"},
                {"epsilon", p.epsilon}};
}

WeightParams weight_params_from_json(const json& j) {
    WeightParams p;
    p.sigma = j.value("sigma", p.sigma);
    p.l = j.value("l", p.l);
    p.mu = j.value("mu", p.mu);
    p.temp = j.value("temp", p.temp);
    p.k_b = j.value("k_b", p.k_b);
    p.epsilon = j.value("epsilon", p.epsilon);
    const std::string hm = j.value("hessian_mode", "signed_eigen");
    if (hm == "signed_eigen")
        p.hessian_mode = HessianMode::signed_eigen;
    else if (hm == "paper_literal_norm")
        p.hessian_mode = HessianMode::paper_literal_norm;
    else
        throw std::runtime_error("checkpoint: unknown hessian_mode '" + hm + "'");
    const std::string mn = j.value("matrix_norm", "spectral");
    if (mn == "spectral")
        p.matrix_norm = MatrixNorm::spectral;
    else if (mn == "infinity")
        p.matrix_norm = MatrixNorm::infinity;
    else
        throw std::runtime_error("checkpoint: unknown matrix_norm '" + mn + "'");
    p.validate();
    return p;
}

Checkpoint make_qnet_checkpoint(const RbfQNet& net, const std::string& config_hash) {
    return {"q_net", kCheckpointVersion, config_hash, qnet_to_json(net)};
}

Checkpoint make_sampler_checkpoint(const SamplerNet& net, const std::string& config_hash) {
    return {"sampler", kCheckpointVersion, config_hash, sampler_to_json(net)};
}

Checkpoint make_compound_checkpoint(const CompoundQ& cq, const std::string& config_hash) {
    return {"compound", kCheckpointVersion, config_hash,
            json{{"q_high", qnet_to_json(cq.q_high())},
                 {"q_low", qnet_to_json(cq.q_low())},
                 {"weight_params", weight_params_to_json(cq.params())}}};
}

namespace {
void require_kind(const Checkpoint& c, const char* kind) {
    if (c.kind != kind)
        throw std::runtime_error("checkpoint: expected kind '" + std::string(kind) + "', found '" +
                                 c.kind + "'");
}
}  // namespace

RbfQNet qnet_from_checkpoint(const Checkpoint& c) {
    require_kind(c, "q_net");
    return qnet_from_json(c.payload);
}

SamplerNet sampler_from_checkpoint(const Checkpoint& c) {
    require_kind(c, "sampler");
    return sampler_from_json(c.payload);
}

CompoundQ compound_from_checkpoint(const Checkpoint& c) {
    require_kind(c, "compound");
    return CompoundQ(qnet_from_json(c.payload.at("q_high")),
                     qnet_from_json(c.payload.at("q_low")),
                     weight_params_from_json(c.payload.at("weight_params")));
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    json j{{"kind", c.kind},
           {"version", c.version},
           {"config_hash", c.config_hash},
           {"payload", c.payload}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("checkpoint: cannot open '" + path.string() + "' for write");
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("checkpoint: write to '" + path.string() + "' failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint: cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("checkpoint: parse error in '" + path.string() + "': " + e.what());
    }
    Checkpoint c;
    c.kind = j.at("kind").get<std::string>();
    c.version = j.at("version").get<std::string>();
    c.config_hash = j.value("config_hash", "");
    c.payload = j.at("payload");
    if (c.version != kCheckpointVersion)
        throw std::runtime_error("checkpoint: version mismatch, file has '" + c.version +
                                 "', this build expects '" + kCheckpointVersion + "'");
    if (c.kind != "q_net" && c.kind != "sampler" && c.kind != "compound")
        throw std::runtime_error("checkpoint: unknown kind '" + c.kind + "'");
    return c;
}

}  // namespace priocomp
