#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace qsc {

// Deterministic finite automaton with a partial transition function.
// States and actions are dense indices; names follow file declaration order.
// Every state keeps at least one enabled action (validated on load).
struct Automaton {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> actions;
  int initial = 0;
  std::vector<std::vector<int>> next_state;  // [state][action], -1 = undefined

  int num_states() const { return static_cast<int>(states.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }

  bool is_enabled(int s, int a) const;
  std::vector<int> enabled(int s) const;
  int next(int s, int a) const;  // requires is_enabled(s, a)

  int state_id(const std::string& name) const;   // -1 if unknown
  int action_id(const std::string& name) const;  // -1 if unknown

  void check_state(int s) const;
};

Automaton load_automaton(const nlohmann::json& j);
nlohmann::json serialize(const Automaton& a);

struct AutomatonPair {
  Automaton control;
  Automaton env;
};

AutomatonPair load_pair(const nlohmann::json& j);
nlohmann::json serialize(const AutomatonPair& p);

// Bundled instances.
AutomatonPair make_cases();
AutomatonPair make_strategy();
AutomatonPair make_combination_lock();

}  // namespace qsc
