#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "priocomp/checkpoint.hpp"
#include "priocomp/config.hpp"
#include "priocomp/env.hpp"
#include "priocomp/indifference.hpp"
#include "priocomp/online.hpp"
#include "priocomp/sampler.hpp"
#include "priocomp/softq.hpp"

namespace py = pybind11;
using namespace priocomp;

namespace {

Vec2 to_vec(const std::pair<double, double>& p) { return {p.first, p.second}; }
std::pair<double, double> from_vec(Vec2 v) { return {v.x, v.y}; }

EnvConfig env_by_name(const std::string& variant) {
    if (variant == "goal") return goal_task_config();
    if (variant == "obstacle") return obstacle_task_config();
    if (variant == "compound") return compound_task_config();
    throw std::invalid_argument("unknown variant '" + variant + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Prioritized composition of maximum-entropy policies";

    py::class_<EnvConfig>(m, "EnvConfig")
        .def_readonly("goal_radius", &EnvConfig::goal_radius)
        .def_readonly("collision_margin", &EnvConfig::collision_margin)
        .def_readonly("horizon", &EnvConfig::horizon)
        .def_readonly("gamma", &EnvConfig::gamma)
        .def_readonly("a_max", &EnvConfig::a_max)
        .def_property_readonly("goal_center",
                               [](const EnvConfig& c) { return from_vec(c.goal_center); })
        .def_property_readonly("start", [](const EnvConfig& c) { return from_vec(c.start); });

    m.def("make_env", &env_by_name, py::arg("variant"),
          "Built-in scenario config: 'goal', 'obstacle' or 'compound'.");

    m.def(
        "step",
        [](const std::pair<double, double>& s, const std::pair<double, double>& a,
           const EnvConfig& cfg) {
            const StepResult r = step(to_vec(s), to_vec(a), cfg);
            return py::make_tuple(from_vec(r.next_state), r.r1, r.r2, r.collision, r.done);
        },
        py::arg("state"), py::arg("action"), py::arg("config"),
        "One transition: returns (next_state, r1, r2, collision, done).");

    m.def(
        "reward_goal",
        [](const std::pair<double, double>& s, const EnvConfig& cfg) {
            return reward_goal(to_vec(s), cfg);
        },
        py::arg("state"), py::arg("config"));
    m.def(
        "reward_obstacle",
        [](const std::pair<double, double>& s, const EnvConfig& cfg) {
            return reward_obstacle(to_vec(s), cfg);
        },
        py::arg("state"), py::arg("config"));

    m.def("se_kernel", &se_kernel, py::arg("x"), py::arg("x_prime"), py::arg("sigma") = 1.0,
          py::arg("l") = 1.0);
    m.def("fermi_dirac", &fermi_dirac, py::arg("e"), py::arg("mu") = 0.0, py::arg("temp") = 0.05,
          py::arg("k_b") = 1.0);

    py::class_<WeightParams>(m, "WeightParams")
        .def(py::init([](double l, double mu, double temp, double epsilon) {
                 WeightParams p;
                 p.l = l;
                 p.mu = mu;
                 p.temp = temp;
                 p.epsilon = epsilon;
                 p.validate();
                 return p;
             }),
             py::arg("l") = 1.0, py::arg("mu") = 0.0, py::arg("temp") = 0.05,
             py::arg("epsilon") = 0.25)
        .def_readonly("l", &WeightParams::l)
        .def_readonly("mu", &WeightParams::mu)
        .def_readonly("temp", &WeightParams::temp)
        .def_readonly("epsilon", &WeightParams::epsilon);

    py::class_<RbfQNet>(m, "RbfQNet")
        .def_static("grid", &RbfQNet::grid, py::arg("nx"), py::arg("ny"), py::arg("na"),
                    py::arg("a_max"), py::arg("bandwidth_scale") = 1.5)
        .def_static("default_grid", &RbfQNet::default_grid, py::arg("a_max"))
        .def_property_readonly("bandwidth", &RbfQNet::bandwidth)
        .def_property_readonly("size", &RbfQNet::size)
        .def("weights", &RbfQNet::weights)
        .def("set_weights", &RbfQNet::set_weights)
        .def(
            "value",
            [](const RbfQNet& q, const std::pair<double, double>& s,
               const std::pair<double, double>& a) { return q.value(to_vec(s), to_vec(a)); },
            py::arg("s"), py::arg("a"))
        .def(
            "derivatives",
            [](const RbfQNet& q, const std::pair<double, double>& s,
               const std::pair<double, double>& a) {
                const DerivativeBundle d = q.eval_with_derivatives(to_vec(s), to_vec(a));
                return py::make_tuple(d.value, from_vec(d.grad),
                                      py::make_tuple(d.hess.xx, d.hess.xy, d.hess.yy));
            },
            py::arg("s"), py::arg("a"),
            "Analytic (value, grad, (hxx, hxy, hyy)) in the action argument.");

    py::class_<CompoundQ>(m, "CompoundQ")
        .def(py::init<RbfQNet, RbfQNet, WeightParams>(), py::arg("q_high"), py::arg("q_low"),
             py::arg("params"))
        .def(
            "value",
            [](const CompoundQ& q, const std::pair<double, double>& s,
               const std::pair<double, double>& a) { return q.value(to_vec(s), to_vec(a)); },
            py::arg("s"), py::arg("a"))
        .def(
            "weight",
            [](const CompoundQ& q, const std::pair<double, double>& s,
               const std::pair<double, double>& a) { return q.weight(to_vec(s), to_vec(a)); },
            py::arg("s"), py::arg("a"));

    py::class_<SamplerNet>(m, "SamplerNet")
        .def_static("init", &SamplerNet::init, py::arg("a_max"), py::arg("hidden") = 64,
                    py::arg("seed") = 0)
        .def_readonly("a_max", &SamplerNet::a_max)
        .def(
            "sample",
            [](const SamplerNet& net, const std::pair<double, double>& s, std::uint64_t seed,
               int n) {
                Rng rng(seed);
                std::vector<std::pair<double, double>> out;
                out.reserve(n);
                for (int i = 0; i < n; ++i) out.push_back(from_vec(net.sample(to_vec(s), rng)));
                return out;
            },
            py::arg("s"), py::arg("seed") = 0, py::arg("n") = 1);

    m.def(
        "soft_value",
        [](const RbfQNet& q, const std::pair<double, double>& s, double alpha, int n, double a_max,
           std::uint64_t seed) {
            Rng rng(seed);
            return soft_value(q, to_vec(s), alpha, n, a_max, rng);
        },
        py::arg("q"), py::arg("s"), py::arg("alpha"), py::arg("n") = 1024, py::arg("a_max") = 0.05,
        py::arg("seed") = 0);

    m.def(
        "mcmc_oracle",
        [](const RbfQNet& q, const std::pair<double, double>& s, double alpha, int n_samples,
           int burn_in, std::uint64_t seed, double a_max) {
            Rng rng(seed);
            std::vector<std::pair<double, double>> out;
            for (Vec2 a : mcmc_oracle(q, to_vec(s), alpha, n_samples, burn_in, rng, a_max))
                out.push_back(from_vec(a));
            return out;
        },
        py::arg("q"), py::arg("s"), py::arg("alpha"), py::arg("n_samples"),
        py::arg("burn_in") = 1000, py::arg("seed") = 0, py::arg("a_max") = 0.05);

    m.def(
        "load_qnet",
        [](const std::string& path) { return qnet_from_checkpoint(load_checkpoint(path)); },
        py::arg("path"));
    m.def(
        "load_sampler",
        [](const std::string& path) { return sampler_from_checkpoint(load_checkpoint(path)); },
        py::arg("path"));
    m.def(
        "load_compound",
        [](const std::string& path) { return compound_from_checkpoint(load_checkpoint(path)); },
        py::arg("path"));
}
