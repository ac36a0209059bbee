#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qsc/rng.hpp"

namespace qsc {

enum class QueryDecision { Learned = 0, Query = 1 };
enum class Phase { Train, Test };

struct EntropyConfig {
  double beta_ent = 0.25;  // IG threshold, bits
  double tau = 0.9;        // chance the control adopts the oracle's answer
};

struct UtilityConfig {
  double beta_util = 0.95;
};

// Shannon entropy in bits; rejects vectors that are not a distribution.
double entropy_bits(const std::vector<double>& dist);

// Expected entropy drop from querying: H(dist) minus the average posterior
// entropy, where answering a^o reshapes the distribution to
// (1 - tau) * dist + tau * one_hot(a^o), weighted by dist(a^o).
double info_gain_bits(const std::vector<double>& dist, const EntropyConfig& cfg);

QueryDecision decide_entropy(const std::vector<double>& dist, const EntropyConfig& cfg);

// Trust the net once it is confident: Learned iff max p > beta_util.
QueryDecision decide_utility(const std::vector<double>& dist, const UtilityConfig& cfg);

// -0.3 on failure; 50 per success, doubling to 100 from the fifth consecutive
// success onward. streak_after counts this step.
double shaped_reward(bool success, int streak_after);

// Tabular action-values over {query, learned} keyed by the control-visible
// state id.
class QTable {
 public:
  QTable(double alpha = 0.5, double gamma = 0.9, double epsilon = 0.05)
      : alpha_(alpha), gamma_(gamma), epsilon_(epsilon) {}

  // Train: epsilon-greedy (ties break to Learned). Test: greedy on the frozen
  // table, forced to Learned when queries are train-only.
  QueryDecision decide(int state, Phase phase, bool query_at_test, Rng& rng) const;

  void update(int state, QueryDecision a, double r, int next_state);

  double q(int state, QueryDecision a) const;

  int streak() const { return streak_; }
  void register_outcome(bool success) { streak_ = success ? streak_ + 1 : 0; }
  void reset_streak() { streak_ = 0; }

  const std::map<int, std::pair<double, double>>& entries() const { return q_; }

 private:
  double alpha_, gamma_, epsilon_;
  std::map<int, std::pair<double, double>> q_;  // {query, learned}
  int streak_ = 0;
};

// CSV columns: state,q_query,q_learned. Names substitute for ids when given.
void write_qtable_csv(std::ostream& out, const QTable& table,
                      const std::vector<std::string>& state_names = {});

}  // namespace qsc
