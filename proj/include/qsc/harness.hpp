#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qsc/automaton.hpp"
#include "qsc/heuristics.hpp"
#include "qsc/lander.hpp"
#include "qsc/policy_net.hpp"

namespace qsc {

enum class Domain { Automata, Lander };
enum class OracleKind { Teacher, Expert, None };
enum class Policy {
  NoOracle,
  Random,
  AlwaysTrain,
  AlwaysTrainTest,
  Entropy,
  Utility,
  RlTrain,
  RlTrainTest,
};

std::string to_string(Domain d);
std::string to_string(OracleKind o);
std::string to_string(Policy p);
Domain domain_from_string(const std::string& s);
OracleKind oracle_from_string(const std::string& s);
Policy policy_from_string(const std::string& s);

// Thrown on bad configuration; the CLI maps it to exit code 2. `flag` names
// the offending option.
struct ConfigError : std::runtime_error {
  ConfigError(std::string flag_, const std::string& msg)
      : std::runtime_error(msg), flag(std::move(flag_)) {}
  std::string flag;
};

struct ExperimentConfig {
  Domain domain = Domain::Automata;
  std::string case_name;  // cases | strategy | combination_lock (automata only)
  OracleKind oracle = OracleKind::Teacher;
  Policy policy = Policy::AlwaysTrainTest;
  int epochs = 40;
  std::uint64_t seed = 0;
  EntropyConfig entropy_cfg;
  UtilityConfig utility_cfg;
  double alpha = 0.5;
  double gamma_q = 0.9;
  double epsilon = 0.05;
  int test_episodes = 5;
  // Automata only: when true, the shared execution never resets at training
  // episode boundaries (episodes are curriculum windows for the learner); when
  // false, both automata restart each training episode. Testing always runs
  // one continuous execution.
  bool continuous_execution = true;
};

// Throws ConfigError; normalizes oracle to None for the oracle-free policies.
void validate(ExperimentConfig& cfg);

struct StepRecord {
  Phase phase = Phase::Train;
  int epoch = 0;  // 1-based during training, 0 for test rows
  int episode = 0;
  int step = 0;
  int control_state = 0;  // automata: state id; lander: cell (both columns)
  int env_state = 0;
  bool queried = false;
  int action = 0;  // automata: action id; lander: inject 0/1
  bool success = false;
  double reward = 0.0;
};

struct Metrics {
  double failure_pct = 0.0;
  double queries_per_episode = 0.0;
  double total_reward = 0.0;  // per-episode mean over the test episodes
};

struct RunResult {
  ExperimentConfig config;
  Metrics metrics;
  std::vector<StepRecord> train_records;
  std::vector<StepRecord> test_records;
  std::vector<int> queries_per_epoch;  // training-phase oracle calls
  std::optional<PolicyNetwork> net;
  std::optional<QTable> qtable;                 // RL policies only
  std::vector<TrajectoryRow> test_trajectory;   // lander only
};

RunResult run_experiment(ExperimentConfig cfg);

Metrics compute_metrics(const std::vector<StepRecord>& test_records, int test_episodes);

// CSV writers. Automata runs translate state/action ids to names.
void write_records_csv(std::ostream& out, const RunResult& result);
void write_results_header(std::ostream& out);
void write_results_row(std::ostream& out, const std::string& case_name,
                       OracleKind oracle, Policy policy, std::uint64_t seed,
                       const Metrics& m);
void write_queries_csv(std::ostream& out, const std::string& case_name,
                       OracleKind oracle, Policy policy, std::uint64_t seed,
                       const std::vector<int>& queries_per_epoch);

struct SuiteConfig {
  Domain domain = Domain::Automata;
  std::vector<std::string> cases;  // automata; ignored for lander
  std::vector<OracleKind> oracles = {OracleKind::Teacher, OracleKind::Expert};
  std::vector<Policy> policies = {Policy::NoOracle,   Policy::Random,
                                  Policy::AlwaysTrain, Policy::AlwaysTrainTest,
                                  Policy::Entropy,     Policy::Utility,
                                  Policy::RlTrain,     Policy::RlTrainTest};
  std::vector<std::uint64_t> seeds = {0, 2, 3, 4, 6};
  int epochs = 40;
  EntropyConfig entropy_cfg;
  UtilityConfig utility_cfg;
  double alpha = 0.5;
  double gamma_q = 0.9;
  double epsilon = 0.05;
  int test_episodes = 5;
  bool continuous_execution = true;
  int threads = 0;  // 0 = hardware concurrency
};

SuiteConfig suite_config_from_json(const nlohmann::json& j);

struct SuiteCell {
  std::string case_name;
  OracleKind oracle = OracleKind::None;
  Policy policy = Policy::NoOracle;
};

// The grid with oracle-free policies collapsed onto oracle=none.
std::vector<SuiteCell> enumerate_cells(const SuiteConfig& cfg);

struct SuiteRun {
  SuiteCell cell;
  std::uint64_t seed = 0;
  Metrics metrics;
  std::vector<int> queries_per_epoch;
  std::string error;  // non-empty when the run failed
};

struct SuiteResult {
  std::vector<SuiteRun> runs;  // cell-major, seed-minor order
};

SuiteResult run_suite(const SuiteConfig& cfg);

void write_suite_results_csv(std::ostream& out, const SuiteResult& r);
void write_suite_queries_csv(std::ostream& out, const SuiteResult& r);
void write_suite_aggregate_csv(std::ostream& out, const SuiteResult& r);
// Summary text table: one row per (case, oracle), one column per policy.
void print_suite_table(std::ostream& out, const SuiteResult& r);

// mean and sample standard deviation (n-1); stdev 0 for n < 2
std::pair<double, double> mean_stdev(const std::vector<double>& xs);

AutomatonPair bundled_pair(const std::string& case_name);

}  // namespace qsc
