#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "qsc/harness.hpp"
#include "qsc/heuristics.hpp"
#include "qsc/lander.hpp"
#include "qsc/oracles.hpp"

namespace py = pybind11;
using namespace qsc;

namespace {

LanderState state_from(const std::array<double, 6>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::array<double, 6> state_to(const LanderState& s) {
  return {s.x, s.y, s.angle, s.vx, s.vy, s.omega};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "query-augmented shared control: simulator core";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, (e.flag + ": " + e.what()).c_str());
    }
  });

  m.def(
      "run",
      [](const std::string& domain, const std::string& case_name,
         const std::string& oracle, const std::string& policy,
         std::uint64_t seed, int epochs, double beta_ent, double tau,
         double beta_util, double alpha, double gamma, double epsilon,
         int test_episodes, bool continuous_execution) {
        ExperimentConfig cfg;
        cfg.domain = domain_from_string(domain);
        cfg.case_name = case_name;
        cfg.oracle = oracle_from_string(oracle);
        cfg.policy = policy_from_string(policy);
        cfg.seed = seed;
        cfg.epochs = epochs;
        cfg.entropy_cfg = {beta_ent, tau};
        cfg.utility_cfg = {beta_util};
        cfg.alpha = alpha;
        cfg.gamma_q = gamma;
        cfg.epsilon = epsilon;
        cfg.test_episodes = test_episodes;
        cfg.continuous_execution = continuous_execution;
        validate(cfg);
        const RunResult r = run_experiment(cfg);
        py::dict out;
        out["failure_pct"] = r.metrics.failure_pct;
        out["queries_per_episode"] = r.metrics.queries_per_episode;
        out["total_reward"] = r.metrics.total_reward;
        out["queries_per_epoch"] = r.queries_per_epoch;
        return out;
      },
      "Train and evaluate one configuration; returns the test metrics.",
      py::arg("domain"), py::arg("case") = "", py::arg("oracle") = "teacher",
      py::arg("policy") = "always_train_test", py::arg("seed") = 0,
      py::arg("epochs") = 40, py::arg("beta_ent") = 0.25, py::arg("tau") = 0.9,
      py::arg("beta_util") = 0.95, py::arg("alpha") = 0.5,
      py::arg("gamma") = 0.9, py::arg("epsilon") = 0.05,
      py::arg("test_episodes") = 5, py::arg("continuous_execution") = true);

  m.def("entropy_bits", &entropy_bits, py::arg("dist"));
  m.def(
      "info_gain_bits",
      [](const std::vector<double>& dist, double tau) {
        return info_gain_bits(dist, {0.0, tau});
      },
      "Expected entropy drop from asking an oracle trusted with weight tau.",
      py::arg("dist"), py::arg("tau") = 0.9);
  m.def("shaped_reward", &shaped_reward, py::arg("success"), py::arg("streak"));

  m.def(
      "physics_step",
      [](const std::array<double, 6>& s, const std::string& engine, bool fired) {
        return state_to(physics_step(state_from(s), engine_from_name(engine), fired));
      },
      "One lander physics step on (x, y, angle, vx, vy, omega).",
      py::arg("state"), py::arg("engine") = "nothing", py::arg("fired") = true);
  m.def(
      "discretize",
      [](const std::array<double, 6>& s) { return discretize(state_from(s)); },
      py::arg("state"));
  m.def(
      "teacher_inject",
      [](const std::array<double, 6>& s, const std::string& engine) {
        return teacher_lander(state_from(s), engine_from_name(engine));
      },
      "Would the lander teacher let this engine fire?", py::arg("state"),
      py::arg("engine"));

  m.def(
      "case_info",
      [](const std::string& name) {
        const AutomatonPair p = bundled_pair(name);
        auto side = [](const Automaton& a) {
          py::dict d;
          d["name"] = a.name;
          d["states"] = a.states;
          d["actions"] = a.actions;
          d["initial"] = a.states[a.initial];
          return d;
        };
        py::dict d;
        d["control"] = side(p.control);
        d["env"] = side(p.env);
        return d;
      },
      py::arg("name"));
}
