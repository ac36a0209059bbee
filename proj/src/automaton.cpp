#include "qsc/automaton.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsc {

void Automaton::check_state(int s) const {
  if (s < 0 || s >= num_states())
    throw std::out_of_range(name + ": unknown state id " + std::to_string(s));
}

bool Automaton::is_enabled(int s, int a) const {
  check_state(s);
  if (a < 0 || a >= num_actions()) return false;
  return next_state[s][a] >= 0;
}

std::vector<int> Automaton::enabled(int s) const {
  check_state(s);
  std::vector<int> out;
  for (int a = 0; a < num_actions(); ++a)
    if (next_state[s][a] >= 0) out.push_back(a);
  return out;
}

int Automaton::next(int s, int a) const {
  check_state(s);
  if (!is_enabled(s, a))
    throw std::invalid_argument(name + ": action " + std::to_string(a) +
                                " not enabled in state " + states[s]);
  return next_state[s][a];
}

int Automaton::state_id(const std::string& n) const {
  auto it = std::find(states.begin(), states.end(), n);
  return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int Automaton::action_id(const std::string& n) const {
  auto it = std::find(actions.begin(), actions.end(), n);
  return it == actions.end() ? -1 : static_cast<int>(it - actions.begin());
}

Automaton load_automaton(const nlohmann::json& j) {
  Automaton a;
  a.name = j.at("name").get<std::string>();
  for (const auto& s : j.at("states")) a.states.push_back(s.get<std::string>());
  for (const auto& s : j.at("actions")) a.actions.push_back(s.get<std::string>());
  if (a.states.empty()) throw std::runtime_error(a.name + ": no states declared");
  if (a.actions.empty()) throw std::runtime_error(a.name + ": no actions declared");
  for (size_t i = 0; i < a.states.size(); ++i)
    for (size_t k = i + 1; k < a.states.size(); ++k)
      if (a.states[i] == a.states[k])
        throw std::runtime_error(a.name + ": duplicate state " + a.states[i]);

  const std::string init = j.at("initial").get<std::string>();
  a.initial = a.state_id(init);
  if (a.initial < 0)
    throw std::runtime_error(a.name + ": initial state " + init + " not declared");

  a.next_state.assign(a.states.size(), std::vector<int>(a.actions.size(), -1));
  for (const auto& t : j.at("transitions")) {
    const std::string from = t.at("from").get<std::string>();
    const std::string act = t.at("action").get<std::string>();
    const std::string to = t.at("to").get<std::string>();
    int s = a.state_id(from);
    int ac = a.action_id(act);
    int d = a.state_id(to);
    if (s < 0) throw std::runtime_error(a.name + ": transition from undeclared state " + from);
    if (ac < 0) throw std::runtime_error(a.name + ": transition on undeclared action " + act);
    if (d < 0) throw std::runtime_error(a.name + ": transition to undeclared state " + to);
    if (a.next_state[s][ac] >= 0)
      throw std::runtime_error(a.name + ": duplicate transition (" + from + ", " + act + ")");
    a.next_state[s][ac] = d;
  }

  for (int s = 0; s < a.num_states(); ++s)
    if (a.enabled(s).empty())
      throw std::runtime_error(a.name + ": state " + a.states[s] + " has an empty enabled set");

  return a;
}

nlohmann::json serialize(const Automaton& a) {
  nlohmann::json j;
  j["name"] = a.name;
  j["states"] = a.states;
  j["actions"] = a.actions;
  j["initial"] = a.states[a.initial];
  nlohmann::json ts = nlohmann::json::array();
  for (int s = 0; s < a.num_states(); ++s)
    for (int ac = 0; ac < a.num_actions(); ++ac)
      if (a.next_state[s][ac] >= 0)
        ts.push_back({{"from", a.states[s]},
                      {"action", a.actions[ac]},
                      {"to", a.states[a.next_state[s][ac]]}});
  j["transitions"] = std::move(ts);
  return j;
}

AutomatonPair load_pair(const nlohmann::json& j) {
  AutomatonPair p;
  p.control = load_automaton(j.at("control"));
  p.env = load_automaton(j.at("env"));
  if (p.control.actions != p.env.actions)
    throw std::runtime_error("pair " + p.control.name + "/" + p.env.name +
                             ": control and env must share one action alphabet");
  return p;
}

nlohmann::json serialize(const AutomatonPair& p) {
  return {{"control", serialize(p.control)}, {"env", serialize(p.env)}};
}

namespace {

Automaton build(const std::string& name, std::vector<std::string> states,
                const std::string& initial,
                std::vector<std::array<std::string, 3>> transitions) {
  nlohmann::json j;
  j["name"] = name;
  j["states"] = states;
  j["actions"] = {"a", "b", "c"};
  j["initial"] = initial;
  nlohmann::json ts = nlohmann::json::array();
  for (const auto& t : transitions)
    ts.push_back({{"from", t[0]}, {"action", t[1]}, {"to", t[2]}});
  j["transitions"] = ts;
  return load_automaton(j);
}

}  // namespace

AutomatonPair make_cases() {
  AutomatonPair p;
  p.control = build("cases_control", {"c0", "c1"}, "c0",
                    {{"c0", "a", "c1"}, {"c1", "b", "c1"}, {"c1", "c", "c1"}});
  p.env = build("cases_env", {"e0", "e1", "e2", "e3", "e4"}, "e0",
                {{"e0", "b", "e1"},
                 {"e0", "c", "e2"},
                 {"e1", "a", "e3"},
                 {"e2", "a", "e4"},
                 {"e3", "b", "e3"},
                 {"e4", "c", "e4"}});
  return p;
}

AutomatonPair make_strategy() {
  AutomatonPair p;
  p.control = build("strategy_control", {"c0", "c1", "c2"}, "c0",
                    {{"c0", "a", "c1"},
                     {"c1", "b", "c1"},
                     {"c1", "c", "c2"},
                     {"c2", "a", "c2"}});
  p.env = build("strategy_env", {"e0", "e1", "e2", "e3"}, "e0",
                {{"e0", "a", "e1"},
                 {"e1", "a", "e2"},
                 {"e2", "b", "e0"},
                 {"e2", "c", "e3"},
                 {"e3", "a", "e3"}});
  return p;
}

AutomatonPair make_combination_lock() {
  AutomatonPair p;
  p.control = build("combination_lock_control", {"c0", "c1", "c2"}, "c0",
                    {{"c0", "a", "c1"},
                     {"c0", "c", "c1"},
                     {"c1", "b", "c2"},
                     {"c2", "a", "c0"}});
  p.env = build("combination_lock_env", {"e0", "e1", "e2", "s3"}, "e0",
                {{"e0", "a", "e1"},
                 {"e0", "c", "s3"},
                 {"e1", "b", "e2"},
                 {"e2", "a", "e0"},
                 {"s3", "b", "s3"}});
  return p;
}

}  // namespace qsc
