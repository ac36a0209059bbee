#include "qsc/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qsc/csv.hpp"
#include "qsc/harness.hpp"
#include "qsc/oracles.hpp"
#include "qsc/svg.hpp"

namespace qsc {

namespace {

// shortest round-trip, but always spelled as a float ("0" -> "0.0")
std::string metric_num(double v) {
  std::string s = csv_num(v);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::uint64_t seed_from_env_or_default() {
  const char* env = std::getenv("QSC_SEED");
  if (!env || !*env) return 0;
  std::uint64_t v = 0;
  const std::string s = env;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("QSC_SEED", "QSC_SEED is not an unsigned integer: \"" + s + "\"");
  return v;
}

std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path;
  return path.substr(0, dot);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct RunArgs {
  std::string domain;
  std::string case_name;
  std::string oracle = "teacher";
  std::string policy;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int epochs = 40;
  double beta_ent = 0.25;
  double beta_util = 0.95;
  double tau = 0.9;
  double alpha = 0.5;
  double gamma = 0.9;
  double epsilon = 0.05;
  int test_episodes = 5;
  bool episodic_training = false;
  bool trajectory = false;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg;
  cfg.domain = domain_from_string(args.domain);
  cfg.case_name = args.case_name;
  cfg.oracle = oracle_from_string(args.oracle);
  cfg.policy = policy_from_string(args.policy);
  cfg.epochs = args.epochs;
  cfg.seed = args.seed_given ? args.seed : seed_from_env_or_default();
  cfg.entropy_cfg.beta_ent = args.beta_ent;
  cfg.entropy_cfg.tau = args.tau;
  cfg.utility_cfg.beta_util = args.beta_util;
  cfg.alpha = args.alpha;
  cfg.gamma_q = args.gamma;
  cfg.epsilon = args.epsilon;
  cfg.test_episodes = args.test_episodes;
  cfg.continuous_execution = !args.episodic_training;
  validate(cfg);
  if (args.trajectory && cfg.domain != Domain::Lander)
    throw ConfigError("--trajectory", "trajectory output is lander-only");

  RunResult res = run_experiment(cfg);

  if (!args.out.empty()) {
    const std::string stem = stem_of(args.out);
    {
      auto out = open_out(args.out);
      write_results_header(out);
      write_results_row(out, res.config.case_name, res.config.oracle,
                        res.config.policy, res.config.seed, res.metrics);
    }
    {
      auto out = open_out(stem + "_records.csv");
      write_records_csv(out, res);
    }
    {
      auto out = open_out(stem + "_queries.csv");
      write_queries_csv(out, res.config.case_name, res.config.oracle,
                        res.config.policy, res.config.seed, res.queries_per_epoch);
    }
    if (res.qtable) {
      auto out = open_out(stem + "_qtable.csv");
      if (res.config.domain == Domain::Automata)
        write_qtable_csv(out, *res.qtable,
                         bundled_pair(res.config.case_name).control.states);
      else
        write_qtable_csv(out, *res.qtable);
    }
    if (args.trajectory) {
      auto out = open_out(stem + "_trajectory.csv");
      write_trajectory_csv(out, res.test_trajectory);
    }
  }

  std::cout << "failure_pct=" << metric_num(res.metrics.failure_pct)
            << " queries_per_episode=" << metric_num(res.metrics.queries_per_episode)
            << " total_reward=" << metric_num(res.metrics.total_reward) << '\n';
  return 0;
}

int cmd_suite(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw ConfigError("--config", "cannot read " + config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  const SuiteConfig cfg = suite_config_from_json(j);
  const SuiteResult res = run_suite(cfg);

  for (const auto& run : res.runs)
    if (!run.error.empty())
      throw std::runtime_error("suite cell " + run.cell.case_name + "/" +
                               to_string(run.cell.oracle) + "/" +
                               to_string(run.cell.policy) + " seed " +
                               std::to_string(run.seed) + " failed: " + run.error);

  const std::string dir = out_dir.empty() ? "." : out_dir;
  {
    auto out = open_out(dir + "/results.csv");
    write_suite_results_csv(out, res);
  }
  {
    auto out = open_out(dir + "/queries.csv");
    write_suite_queries_csv(out, res);
  }
  {
    auto out = open_out(dir + "/aggregate.csv");
    write_suite_aggregate_csv(out, res);
  }
  print_suite_table(std::cout, res);
  return 0;
}

int cmd_inspect(const std::string& target) {
  AutomatonPair pair;
  std::string norm = target;
  for (char& c : norm)
    if (c == '-') c = '_';
  if (norm == "cases" || norm == "strategy" || norm == "combination_lock") {
    pair = bundled_pair(norm);
  } else {
    std::ifstream in(target);
    if (!in) throw ConfigError("--automata", "cannot read " + target);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("--automata", std::string("invalid JSON: ") + e.what());
    }
    try {
      pair = load_pair(j);
    } catch (const std::exception& e) {
      throw ConfigError("--automata", e.what());
    }
  }

  auto print_automaton = [](const Automaton& a) {
    std::cout << a.name << '\n';
    std::cout << "  states:";
    for (const auto& s : a.states) std::cout << ' ' << s;
    std::cout << "\n  alphabet:";
    for (const auto& act : a.actions) std::cout << ' ' << act;
    std::cout << "\n  initial: " << a.states[a.initial] << '\n';
    for (int s = 0; s < a.num_states(); ++s) {
      std::cout << "  en(" << a.states[s] << ") = {";
      bool first = true;
      for (int act : a.enabled(s)) {
        if (!first) std::cout << ',';
        std::cout << a.actions[act];
        first = false;
      }
      std::cout << "}\n";
    }
  };
  print_automaton(pair.control);
  print_automaton(pair.env);
  std::cout << "validation: ok\n";
  return 0;
}

int cmd_plot(const std::string& in_path, const std::string& kind,
             const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw ConfigError("--in", "cannot read " + in_path);
  std::ostringstream rendered;
  if (kind == "queries") {
    render_queries_svg(rendered, parse_queries_csv(in));
  } else if (kind == "failure") {
    render_failure_svg(rendered, parse_failure_csv(in));
  } else {
    throw ConfigError("--kind", "kind must be queries or failure");
  }
  auto out = open_out(out_path);
  out << rendered.str();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"query-augmented shared control: simulator and experiment harness"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "train and evaluate one configuration");
  run->add_option("--domain", run_args.domain, "automata | lander")->required();
  run->add_option("--case", run_args.case_name,
                  "automata case: cases | strategy | combination-lock");
  run->add_option("--oracle", run_args.oracle, "teacher | expert | none")
      ->default_str("teacher");
  run->add_option("--policy", run_args.policy,
                  "no-oracle | random | always-train | always-train-test | "
                  "entropy | utility | rl-train | rl-train-test")
      ->required();
  auto* seed_opt = run->add_option("--seed", run_args.seed,
                                   "rng seed (default: QSC_SEED env, then 0)");
  run->add_option("--out", run_args.out,
                  "results CSV path; also writes <stem>_records.csv, "
                  "<stem>_queries.csv and friends");
  run->add_option("--epochs", run_args.epochs, "training epochs")
      ->default_val(40);
  run->add_option("--beta-ent", run_args.beta_ent,
                  "entropy policy: query when expected information gain "
                  "exceeds this")
      ->default_val(0.25);
  run->add_option("--beta-util", run_args.beta_util,
                  "utility policy: rely on the net when max prob exceeds this")
      ->default_val(0.95);
  run->add_option("--tau", run_args.tau, "entropy policy: oracle trust weight")
      ->default_val(0.9);
  run->add_option("--alpha", run_args.alpha, "q-learning step size")
      ->default_val(0.5);
  run->add_option("--gamma", run_args.gamma, "q-learning discount")
      ->default_val(0.9);
  run->add_option("--epsilon", run_args.epsilon, "q-learning exploration rate")
      ->default_val(0.05);
  run->add_option("--test-episodes", run_args.test_episodes, "test episodes")
      ->default_val(5);
  run->add_flag("--episodic-training", run_args.episodic_training,
                "restart the automata execution at every training episode "
                "(default: continuous)");
  run->add_flag("--trajectory", run_args.trajectory,
                "write <stem>_trajectory.csv with the test flight (lander)");

  std::string suite_config, suite_out_dir = ".";
  auto* suite = app.add_subcommand("suite", "run the full experiment grid");
  suite->add_option("--config", suite_config, "suite config JSON")->required();
  suite->add_option("--out-dir", suite_out_dir,
                    "directory for results.csv, queries.csv, aggregate.csv")
      ->default_str(".");

  std::string inspect_target;
  auto* inspect = app.add_subcommand("inspect", "describe an automaton pair");
  inspect
      ->add_option("--automata", inspect_target,
                   "pair JSON path, or a bundled name (cases, strategy, "
                   "combination-lock)")
      ->required();

  std::string plot_in, plot_kind, plot_out;
  auto* plot = app.add_subcommand("plot", "render a CSV as an SVG chart");
  plot->add_option("--in", plot_in, "input CSV (from run or suite)")->required();
  plot->add_option("--kind", plot_kind, "queries | failure")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) {
      run_args.seed_given = seed_opt->count() > 0;
      return cmd_run(run_args);
    }
    if (*suite) return cmd_suite(suite_config, suite_out_dir);
    if (*inspect) return cmd_inspect(inspect_target);
    if (*plot) return cmd_plot(plot_in, plot_kind, plot_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.flag << ": " << e.what() << '\n';
    return 2;
  } catch (const PlotError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qsc
