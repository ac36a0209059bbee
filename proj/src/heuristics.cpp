#include "qsc/heuristics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qsc/csv.hpp"

namespace qsc {

double entropy_bits(const std::vector<double>& dist) {
  double sum = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (p < 0.0) throw std::invalid_argument("entropy: negative probability");
    sum += p;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("entropy: distribution does not sum to 1");
  return h;
}

double info_gain_bits(const std::vector<double>& dist, const EntropyConfig& cfg) {
  const double h = entropy_bits(dist);
  double h_post = 0.0;
  std::vector<double> posterior(dist.size());
  for (std::size_t ans = 0; ans < dist.size(); ++ans) {
    if (dist[ans] <= 0.0) continue;
    for (std::size_t a = 0; a < dist.size(); ++a)
      posterior[a] = (1.0 - cfg.tau) * dist[a] + (a == ans ? cfg.tau : 0.0);
    h_post += dist[ans] * entropy_bits(posterior);
  }
  return h - h_post;
}

QueryDecision decide_entropy(const std::vector<double>& dist, const EntropyConfig& cfg) {
  return info_gain_bits(dist, cfg) > cfg.beta_ent ? QueryDecision::Query
                                                  : QueryDecision::Learned;
}

QueryDecision decide_utility(const std::vector<double>& dist, const UtilityConfig& cfg) {
  double top = 0.0;
  for (double p : dist) top = std::max(top, p);
  return top > cfg.beta_util ? QueryDecision::Learned : QueryDecision::Query;
}

double shaped_reward(bool success, int streak_after) {
  if (!success) return -0.3;
  return streak_after >= 5 ? 100.0 : 50.0;
}

QueryDecision QTable::decide(int state, Phase phase, bool query_at_test, Rng& rng) const {
  if (phase == Phase::Test && !query_at_test) return QueryDecision::Learned;
  double q_query = 0.0, q_learned = 0.0;
  if (auto it = q_.find(state); it != q_.end()) {
    q_query = it->second.first;
    q_learned = it->second.second;
  }
  if (phase == Phase::Train && rng.uniform() < epsilon_)
    return static_cast<QueryDecision>(rng.uniform_int(2));
  return q_query > q_learned ? QueryDecision::Query : QueryDecision::Learned;
}

void QTable::update(int state, QueryDecision a, double r, int next_state) {
  auto& cell = q_[state];  // zero-init on first touch
  double& qa = a == QueryDecision::Query ? cell.first : cell.second;
  double next_best = 0.0;
  if (auto it = q_.find(next_state); it != q_.end())
    next_best = std::max(it->second.first, it->second.second);
  qa += alpha_ * (r + gamma_ * next_best - qa);
}

double QTable::q(int state, QueryDecision a) const {
  auto it = q_.find(state);
  if (it == q_.end()) return 0.0;
  return a == QueryDecision::Query ? it->second.first : it->second.second;
}

void write_qtable_csv(std::ostream& out, const QTable& table,
                      const std::vector<std::string>& state_names) {
  out << "state,q_query,q_learned\n";
  for (const auto& [state, q] : table.entries()) {
    if (state >= 0 && state < static_cast<int>(state_names.size()))
      out << state_names[state];
    else
      out << state;
    out << ',' << csv_num(q.first) << ',' << csv_num(q.second) << '\n';
  }
}

}  // namespace qsc
