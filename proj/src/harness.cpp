#include "qsc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "qsc/csv.hpp"
#include "qsc/oracles.hpp"
#include "qsc/shared_system.hpp"

namespace qsc {

namespace {

constexpr std::uint64_t net_seed_salt = 0x9e3779b97f4a7c15ull;
constexpr int automata_episodes = 19;  // per epoch, lengths 1..19
constexpr int lander_episode_steps = 200;

std::string normalized(std::string s) {
  for (char& c : s)
    if (c == '-') c = '_';
  return s;
}

bool is_rl(Policy p) { return p == Policy::RlTrain || p == Policy::RlTrainTest; }

bool uses_oracle(Policy p) {
  return p != Policy::NoOracle && p != Policy::Random;
}

// Per-step Query/Learned choice shared by both domains.
struct PolicyEngine {
  Policy policy;
  const EntropyConfig& ent;
  const UtilityConfig& util;
  QTable* qtable;  // set for RL policies

  QueryDecision decide(const std::vector<double>& dist, int visible_state,
                       Phase phase, Rng& rng) const {
    switch (policy) {
      case Policy::NoOracle:
      case Policy::Random:
        return QueryDecision::Learned;
      case Policy::AlwaysTrain:
        return phase == Phase::Train ? QueryDecision::Query : QueryDecision::Learned;
      case Policy::AlwaysTrainTest:
        return QueryDecision::Query;
      case Policy::Entropy:
        return decide_entropy(dist, ent);
      case Policy::Utility:
        return decide_utility(dist, util);
      case Policy::RlTrain:
        return qtable->decide(visible_state, phase, false, rng);
      case Policy::RlTrainTest:
        return qtable->decide(visible_state, phase, true, rng);
    }
    return QueryDecision::Learned;
  }
};

RunResult run_automata(const ExperimentConfig& cfg) {
  const AutomatonPair pair = bundled_pair(cfg.case_name);
  const Automaton& ctrl = pair.control;
  const Automaton& env = pair.env;

  std::optional<JointValueTable> values;
  if (cfg.oracle == OracleKind::Teacher) values = solve_joint_values(ctrl, env);

  RunResult res;
  res.config = cfg;
  Rng rng(cfg.seed);
  PolicyNetwork net(ctrl.num_states() * ctrl.num_actions(), ctrl.num_actions(),
                    cfg.seed ^ net_seed_salt);
  QTable qtable(cfg.alpha, cfg.gamma_q, cfg.epsilon);
  const PolicyEngine engine{cfg.policy, cfg.entropy_cfg, cfg.utility_cfg,
                            is_rl(cfg.policy) ? &qtable : nullptr};

  JointState js{ctrl.initial, env.initial};
  int prev_action = -1;

  auto run_step = [&](Phase phase, int epoch, int episode, int step) -> bool {
    const auto mask = ctrl.enabled(js.control_state);
    std::vector<double> dist;
    if (cfg.policy != Policy::Random)
      dist = net.forward(encode_automata_obs(ctrl.num_states(), ctrl.num_actions(),
                                             js.control_state, prev_action),
                         mask);
    const QueryDecision decision = engine.decide(dist, js.control_state, phase, rng);
    const bool queried = decision == QueryDecision::Query;

    int a_c;
    if (cfg.policy == Policy::Random) {
      a_c = rng.pick(mask);
    } else if (queried) {
      const auto answer = cfg.oracle == OracleKind::Teacher ? teacher(*values, js)
                                                            : expert(env, js);
      std::vector<int> usable;
      for (int a : answer)
        if (ctrl.is_enabled(js.control_state, a)) usable.push_back(a);
      a_c = usable.empty() ? rng.pick(mask) : rng.pick(usable);
    } else {
      a_c = select_action(
          dist, phase == Phase::Train ? SelectMode::Sample : SelectMode::Greedy, rng);
    }

    const int a_e = env.is_enabled(js.env_state, a_c)
                        ? a_c
                        : rng.pick(env.enabled(js.env_state));
    const StepOutcome out = step_agreement(ctrl, env, js, a_c, a_e);

    if (phase == Phase::Train) {
      if (cfg.policy != Policy::Random) net.update(a_c, out.success, queried);
      if (engine.qtable) {
        qtable.register_outcome(out.success);
        const double r = shaped_reward(out.success, qtable.streak());
        qtable.update(js.control_state, decision, r, out.next.control_state);
      }
    }

    StepRecord rec;
    rec.phase = phase;
    rec.epoch = epoch;
    rec.episode = episode;
    rec.step = step;
    rec.control_state = js.control_state;
    rec.env_state = js.env_state;
    rec.queried = queried;
    rec.action = a_c;
    rec.success = out.success;
    rec.reward = out.success ? 1.0 : 0.0;
    (phase == Phase::Train ? res.train_records : res.test_records).push_back(rec);

    prev_action = a_c;
    js = out.next;
    return queried;
  };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    int epoch_queries = 0;
    for (int episode = 1; episode <= automata_episodes; ++episode) {
      if (!cfg.continuous_execution) js = {ctrl.initial, env.initial};
      net.reset_hidden();
      prev_action = -1;
      qtable.reset_streak();
      for (int step = 1; step <= episode; ++step)
        epoch_queries += run_step(Phase::Train, epoch, episode, step);
    }
    res.queries_per_epoch.push_back(epoch_queries);
  }

  // Test: one continuous execution, restarted once here; episodes only reset
  // the learner's context.
  js = {ctrl.initial, env.initial};
  for (int episode = 1; episode <= cfg.test_episodes; ++episode) {
    net.reset_hidden();
    prev_action = -1;
    for (int step = 1; step <= automata_episodes; ++step)
      run_step(Phase::Test, 0, episode, step);
  }

  res.metrics = compute_metrics(res.test_records, cfg.test_episodes);
  res.net = std::move(net);
  if (is_rl(cfg.policy)) res.qtable = std::move(qtable);
  return res;
}

RunResult run_lander(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  Rng rng(cfg.seed);
  PolicyNetwork net(6 * 5 + 2, 2, cfg.seed ^ net_seed_salt);
  QTable qtable(cfg.alpha, cfg.gamma_q, cfg.epsilon);
  const PolicyEngine engine{cfg.policy, cfg.entropy_cfg, cfg.utility_cfg,
                            is_rl(cfg.policy) ? &qtable : nullptr};
  const std::vector<int> full_mask{0, 1};

  LanderState state;
  int prev_inject = -1;
  int trajectory_step = 0;

  auto run_step = [&](Phase phase, int epoch, int episode, int step) -> bool {
    const int cell = discretize(state);
    const Engine request = operator_policy(state, rng);

    std::vector<double> dist;
    if (cfg.policy != Policy::Random)
      dist = net.forward(encode_lander_obs(cell, prev_inject), full_mask);
    const QueryDecision decision = engine.decide(dist, cell, phase, rng);
    const bool queried = decision == QueryDecision::Query;
    const bool teacher_inject = teacher_lander(state, request);

    bool inject;
    if (cfg.policy == Policy::Random)
      inject = rng.uniform_int(2) == 1;
    else if (queried)
      inject = teacher_inject;
    else
      inject = select_action(dist,
                             phase == Phase::Train ? SelectMode::Sample
                                                   : SelectMode::Greedy,
                             rng) == 1;

    const LanderStepOutcome out = step_restriction(state, request, inject);
    const bool success = inject == teacher_inject;
    const double r = reward(state, out.next, out.fired, request);

    if (phase == Phase::Test)
      res.test_trajectory.push_back(
          {++trajectory_step, state, request, inject, success, r});

    // The net only ever trains on oracle answers here: activation is the
    // operator's doing, and agreement with the teacher is not observable
    // without asking.
    if (phase == Phase::Train && queried && cfg.policy != Policy::Random)
      net.update(inject ? 1 : 0, true, true);

    LanderState next = out.next;
    const bool landed_or_crashed = detect_terminal(next) != Terminal::Flying;
    if (landed_or_crashed) next = initial_state(rng);

    if (phase == Phase::Train && engine.qtable) {
      qtable.register_outcome(success);
      const double shaped = shaped_reward(success, qtable.streak());
      qtable.update(cell, decision, shaped, discretize(next));
    }

    StepRecord rec;
    rec.phase = phase;
    rec.epoch = epoch;
    rec.episode = episode;
    rec.step = step;
    rec.control_state = cell;
    rec.env_state = cell;
    rec.queried = queried;
    rec.action = inject ? 1 : 0;
    rec.success = success;
    rec.reward = r;
    (phase == Phase::Train ? res.train_records : res.test_records).push_back(rec);

    if (landed_or_crashed) {
      net.reset_hidden();
      prev_inject = -1;
    } else {
      prev_inject = inject ? 1 : 0;
    }
    state = next;
    return queried;
  };

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    state = initial_state(rng);
    net.reset_hidden();
    prev_inject = -1;
    qtable.reset_streak();
    int epoch_queries = 0;
    for (int step = 1; step <= lander_episode_steps; ++step)
      epoch_queries += run_step(Phase::Train, epoch, 1, step);
    res.queries_per_epoch.push_back(epoch_queries);
  }

  for (int episode = 1; episode <= cfg.test_episodes; ++episode) {
    state = initial_state(rng);
    net.reset_hidden();
    prev_inject = -1;
    for (int step = 1; step <= lander_episode_steps; ++step)
      run_step(Phase::Test, 0, episode, step);
  }

  res.metrics = compute_metrics(res.test_records, cfg.test_episodes);
  res.net = std::move(net);
  if (is_rl(cfg.policy)) res.qtable = std::move(qtable);
  return res;
}

}  // namespace

std::string to_string(Domain d) {
  return d == Domain::Automata ? "automata" : "lander";
}

std::string to_string(OracleKind o) {
  switch (o) {
    case OracleKind::Teacher: return "teacher";
    case OracleKind::Expert: return "expert";
    case OracleKind::None: return "none";
  }
  return "none";
}

std::string to_string(Policy p) {
  switch (p) {
    case Policy::NoOracle: return "no_oracle";
    case Policy::Random: return "random";
    case Policy::AlwaysTrain: return "always_train";
    case Policy::AlwaysTrainTest: return "always_train_test";
    case Policy::Entropy: return "entropy";
    case Policy::Utility: return "utility";
    case Policy::RlTrain: return "rl_train";
    case Policy::RlTrainTest: return "rl_train_test";
  }
  return "no_oracle";
}

Domain domain_from_string(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "automata") return Domain::Automata;
  if (n == "lander") return Domain::Lander;
  throw ConfigError("--domain", "unknown domain: " + s);
}

OracleKind oracle_from_string(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "teacher") return OracleKind::Teacher;
  if (n == "expert") return OracleKind::Expert;
  if (n == "none") return OracleKind::None;
  throw ConfigError("--oracle", "unknown oracle: " + s);
}

Policy policy_from_string(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "no_oracle") return Policy::NoOracle;
  if (n == "random") return Policy::Random;
  if (n == "always_train") return Policy::AlwaysTrain;
  if (n == "always_train_test") return Policy::AlwaysTrainTest;
  if (n == "entropy") return Policy::Entropy;
  if (n == "utility") return Policy::Utility;
  if (n == "rl_train") return Policy::RlTrain;
  if (n == "rl_train_test") return Policy::RlTrainTest;
  throw ConfigError("--policy", "unknown policy: " + s);
}

AutomatonPair bundled_pair(const std::string& case_name) {
  const std::string n = normalized(case_name);
  if (n == "cases") return make_cases();
  if (n == "strategy") return make_strategy();
  if (n == "combination_lock") return make_combination_lock();
  throw ConfigError("--case", "unknown case: " + case_name);
}

void validate(ExperimentConfig& cfg) {
  if (cfg.domain == Domain::Automata) {
    if (cfg.case_name.empty())
      throw ConfigError("--case", "--case is required with --domain automata");
    bundled_pair(cfg.case_name);  // throws on unknown
    cfg.case_name = normalized(cfg.case_name);
  } else {
    if (cfg.oracle == OracleKind::Expert)
      throw ConfigError("--oracle", "expert unavailable for lander");
    cfg.case_name = "lander";
  }
  if (!uses_oracle(cfg.policy)) {
    cfg.oracle = OracleKind::None;
  } else if (cfg.oracle == OracleKind::None) {
    throw ConfigError("--oracle",
                      "policy " + to_string(cfg.policy) + " needs an oracle");
  }
  if (cfg.epochs <= 0) throw ConfigError("--epochs", "epochs must be positive");
  if (cfg.test_episodes <= 0)
    throw ConfigError("--test-episodes", "test episodes must be positive");
  if (cfg.entropy_cfg.tau < 0.0 || cfg.entropy_cfg.tau > 1.0)
    throw ConfigError("--tau", "tau must be in [0, 1]");
  if (cfg.entropy_cfg.beta_ent < 0.0)
    throw ConfigError("--beta-ent", "beta-ent must be nonnegative");
  if (cfg.utility_cfg.beta_util < 0.0 || cfg.utility_cfg.beta_util > 1.0)
    throw ConfigError("--beta-util", "beta-util must be in [0, 1]");
  if (cfg.alpha <= 0.0 || cfg.alpha > 1.0)
    throw ConfigError("--alpha", "alpha must be in (0, 1]");
  if (cfg.gamma_q <= 0.0 || cfg.gamma_q >= 1.0)
    throw ConfigError("--gamma", "gamma must be in (0, 1)");
  if (cfg.epsilon < 0.0 || cfg.epsilon > 1.0)
    throw ConfigError("--epsilon", "epsilon must be in [0, 1]");
}

RunResult run_experiment(ExperimentConfig cfg) {
  validate(cfg);
  return cfg.domain == Domain::Automata ? run_automata(cfg) : run_lander(cfg);
}

Metrics compute_metrics(const std::vector<StepRecord>& test_records,
                        int test_episodes) {
  Metrics m;
  if (test_records.empty() || test_episodes <= 0) return m;
  int failed = 0;
  int queried = 0;
  double reward_sum = 0.0;
  for (const auto& r : test_records) {
    failed += r.success ? 0 : 1;
    queried += r.queried ? 1 : 0;
    reward_sum += r.reward;
  }
  m.failure_pct = 100.0 * failed / static_cast<double>(test_records.size());
  m.queries_per_episode = queried / static_cast<double>(test_episodes);
  m.total_reward = reward_sum / static_cast<double>(test_episodes);
  return m;
}

void write_records_csv(std::ostream& out, const RunResult& result) {
  const bool automata = result.config.domain == Domain::Automata;
  AutomatonPair pair;
  if (automata) pair = bundled_pair(result.config.case_name);

  out << "phase,epoch,episode,step,control_state,env_state,queried,action,success,reward\n";
  auto emit = [&](const std::vector<StepRecord>& records) {
    for (const auto& r : records) {
      out << (r.phase == Phase::Train ? "train" : "test") << ',' << r.epoch << ','
          << r.episode << ',' << r.step << ',';
      if (automata)
        out << pair.control.states[r.control_state] << ','
            << pair.env.states[r.env_state] << ',';
      else
        out << r.control_state << ',' << r.env_state << ',';
      out << (r.queried ? 1 : 0) << ',';
      if (automata)
        out << pair.control.actions[r.action];
      else
        out << r.action;
      out << ',' << (r.success ? 1 : 0) << ',' << csv_num(r.reward) << '\n';
    }
  };
  emit(result.train_records);
  emit(result.test_records);
}

void write_results_header(std::ostream& out) {
  out << "case,oracle,policy,seed,failure_pct,queries_per_episode,total_reward\n";
}

void write_results_row(std::ostream& out, const std::string& case_name,
                       OracleKind oracle, Policy policy, std::uint64_t seed,
                       const Metrics& m) {
  out << case_name << ',' << to_string(oracle) << ',' << to_string(policy) << ','
      << seed << ',' << csv_num(m.failure_pct) << ','
      << csv_num(m.queries_per_episode) << ',' << csv_num(m.total_reward) << '\n';
}

void write_queries_csv(std::ostream& out, const std::string& case_name,
                       OracleKind oracle, Policy policy, std::uint64_t seed,
                       const std::vector<int>& queries_per_epoch) {
  out << "case,oracle,policy,seed,epoch,queries\n";
  for (std::size_t i = 0; i < queries_per_epoch.size(); ++i)
    out << case_name << ',' << to_string(oracle) << ',' << to_string(policy)
        << ',' << seed << ',' << i + 1 << ',' << queries_per_epoch[i] << '\n';
}

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  SuiteConfig cfg;
  if (!j.is_object()) throw ConfigError("--config", "suite config must be a JSON object");
  if (!j.contains("domain"))
    throw ConfigError("--config", "suite config needs a \"domain\" field");
  cfg.domain = domain_from_string(j.at("domain").get<std::string>());
  if (j.contains("cases")) {
    cfg.cases.clear();
    for (const auto& c : j.at("cases")) {
      const std::string name = normalized(c.get<std::string>());
      if (name != "cases" && name != "strategy" && name != "combination_lock")
        throw ConfigError("--config", "unknown case: " + name);
      cfg.cases.push_back(name);
    }
  }
  if (j.contains("oracles")) {
    cfg.oracles.clear();
    for (const auto& o : j.at("oracles"))
      cfg.oracles.push_back(oracle_from_string(o.get<std::string>()));
  }
  if (j.contains("policies")) {
    cfg.policies.clear();
    for (const auto& p : j.at("policies"))
      cfg.policies.push_back(policy_from_string(p.get<std::string>()));
  }
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    if (cfg.seeds.empty()) throw ConfigError("--config", "seeds must be non-empty");
  }
  if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
  if (j.contains("beta_ent")) cfg.entropy_cfg.beta_ent = j.at("beta_ent").get<double>();
  if (j.contains("tau")) cfg.entropy_cfg.tau = j.at("tau").get<double>();
  if (j.contains("beta_util")) cfg.utility_cfg.beta_util = j.at("beta_util").get<double>();
  if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
  if (j.contains("gamma")) cfg.gamma_q = j.at("gamma").get<double>();
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("test_episodes")) cfg.test_episodes = j.at("test_episodes").get<int>();
  if (j.contains("continuous_execution"))
    cfg.continuous_execution = j.at("continuous_execution").get<bool>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  return cfg;
}

std::vector<SuiteCell> enumerate_cells(const SuiteConfig& cfg) {
  std::vector<std::string> cases;
  if (cfg.domain == Domain::Lander)
    cases = {"lander"};
  else if (cfg.cases.empty())
    cases = {"cases", "strategy", "combination_lock"};
  else
    cases = cfg.cases;

  std::vector<SuiteCell> cells;
  for (const auto& c : cases) {
    for (Policy p : cfg.policies) {
      if (!uses_oracle(p)) {
        cells.push_back({c, OracleKind::None, p});
      } else if (cfg.domain == Domain::Lander) {
        cells.push_back({c, OracleKind::Teacher, p});
      } else {
        for (OracleKind o : cfg.oracles)
          if (o != OracleKind::None) cells.push_back({c, o, p});
      }
    }
  }
  return cells;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  const auto cells = enumerate_cells(cfg);
  SuiteResult result;
  result.runs.resize(cells.size() * cfg.seeds.size());

  std::vector<std::pair<std::size_t, std::size_t>> jobs;  // (cell, seed) indices
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) jobs.push_back({c, s});

  std::atomic<std::size_t> next_job{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next_job.fetch_add(1);
      if (i >= jobs.size()) return;
      const auto [c, s] = jobs[i];
      SuiteRun& run = result.runs[c * cfg.seeds.size() + s];
      run.cell = cells[c];
      run.seed = cfg.seeds[s];
      try {
        ExperimentConfig ec;
        ec.domain = cfg.domain;
        ec.case_name = cells[c].case_name;
        ec.oracle = cells[c].oracle;
        ec.policy = cells[c].policy;
        ec.epochs = cfg.epochs;
        ec.seed = cfg.seeds[s];
        ec.entropy_cfg = cfg.entropy_cfg;
        ec.utility_cfg = cfg.utility_cfg;
        ec.alpha = cfg.alpha;
        ec.gamma_q = cfg.gamma_q;
        ec.epsilon = cfg.epsilon;
        ec.test_episodes = cfg.test_episodes;
        ec.continuous_execution = cfg.continuous_execution;
        RunResult r = run_experiment(std::move(ec));
        run.metrics = r.metrics;
        run.queries_per_epoch = std::move(r.queries_per_epoch);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };

  unsigned want = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::thread::hardware_concurrency();
  if (want == 0) want = 4;
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(want, jobs.size() ? jobs.size() : 1));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return result;
}

void write_suite_results_csv(std::ostream& out, const SuiteResult& r) {
  write_results_header(out);
  for (const auto& run : r.runs) {
    if (!run.error.empty()) continue;
    write_results_row(out, run.cell.case_name, run.cell.oracle, run.cell.policy,
                      run.seed, run.metrics);
  }
}

void write_suite_queries_csv(std::ostream& out, const SuiteResult& r) {
  out << "case,oracle,policy,seed,epoch,queries\n";
  for (const auto& run : r.runs) {
    if (!run.error.empty()) continue;
    for (std::size_t i = 0; i < run.queries_per_epoch.size(); ++i)
      out << run.cell.case_name << ',' << to_string(run.cell.oracle) << ','
          << to_string(run.cell.policy) << ',' << run.seed << ',' << i + 1 << ','
          << run.queries_per_epoch[i] << '\n';
  }
}

std::pair<double, double> mean_stdev(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

namespace {

struct CellAggregate {
  SuiteCell cell;
  std::pair<double, double> failure, queries, reward;
  std::size_t n = 0;
};

std::vector<CellAggregate> aggregate(const SuiteResult& r) {
  std::vector<CellAggregate> out;
  std::size_t i = 0;
  while (i < r.runs.size()) {
    const SuiteCell& cell = r.runs[i].cell;
    std::vector<double> f, q, w;
    std::size_t j = i;
    for (; j < r.runs.size(); ++j) {
      const auto& run = r.runs[j];
      if (run.cell.case_name != cell.case_name || run.cell.oracle != cell.oracle ||
          run.cell.policy != cell.policy)
        break;
      if (!run.error.empty()) continue;
      f.push_back(run.metrics.failure_pct);
      q.push_back(run.metrics.queries_per_episode);
      w.push_back(run.metrics.total_reward);
    }
    CellAggregate agg;
    agg.cell = cell;
    agg.failure = mean_stdev(f);
    agg.queries = mean_stdev(q);
    agg.reward = mean_stdev(w);
    agg.n = f.size();
    out.push_back(agg);
    i = j;
  }
  return out;
}

}  // namespace

void write_suite_aggregate_csv(std::ostream& out, const SuiteResult& r) {
  out << "case,oracle,policy,failure_mean,failure_std,queries_mean,queries_std,"
         "reward_mean,reward_std\n";
  for (const auto& a : aggregate(r)) {
    if (a.n == 0) continue;
    out << a.cell.case_name << ',' << to_string(a.cell.oracle) << ','
        << to_string(a.cell.policy) << ',' << csv_num(a.failure.first) << ','
        << csv_num(a.failure.second) << ',' << csv_num(a.queries.first) << ','
        << csv_num(a.queries.second) << ',' << csv_num(a.reward.first) << ','
        << csv_num(a.reward.second) << '\n';
  }
}

void print_suite_table(std::ostream& out, const SuiteResult& r) {
  const auto aggs = aggregate(r);
  const Policy columns[] = {Policy::NoOracle,   Policy::Random,
                            Policy::AlwaysTrain, Policy::AlwaysTrainTest,
                            Policy::Entropy,     Policy::Utility,
                            Policy::RlTrain,     Policy::RlTrainTest};

  // rows: (case, oracle) in first-seen order; oracle-free policies are folded
  // into every oracle row of the same case
  std::vector<std::pair<std::string, OracleKind>> rows;
  for (const auto& a : aggs) {
    if (a.cell.oracle == OracleKind::None) continue;
    std::pair<std::string, OracleKind> key{a.cell.case_name, a.cell.oracle};
    if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
  }
  if (rows.empty())
    for (const auto& a : aggs) {
      std::pair<std::string, OracleKind> key{a.cell.case_name, a.cell.oracle};
      if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
    }

  auto find_agg = [&](const std::string& case_name, OracleKind oracle,
                      Policy p) -> const CellAggregate* {
    for (const auto& a : aggs)
      if (a.cell.case_name == case_name && a.cell.oracle == oracle &&
          a.cell.policy == p && a.n > 0)
        return &a;
    return nullptr;
  };

  auto fmt_cell = [](const CellAggregate* a) -> std::string {
    if (!a) return "-";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f+-%.2f", a->failure.first,
                  a->failure.second);
    return buf;
  };

  out << "failure % (mean±stdev over seeds)\n";
  out << "case/oracle";
  for (Policy p : columns) out << '\t' << to_string(p);
  out << '\n';
  for (const auto& [case_name, oracle] : rows) {
    out << case_name << '/' << to_string(oracle);
    for (Policy p : columns) {
      const OracleKind lookup = uses_oracle(p) ? oracle : OracleKind::None;
      out << '\t' << fmt_cell(find_agg(case_name, lookup, p));
    }
    out << '\n';
  }
}

}  // namespace qsc
