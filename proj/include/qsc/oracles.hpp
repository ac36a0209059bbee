#pragma once

#include <iosfwd>
#include <vector>

#include "qsc/automaton.hpp"
#include "qsc/lander.hpp"
#include "qsc/shared_system.hpp"

namespace qsc {

// Action-values of the joint system under the agreement protocol: 1 per
// successful joint step, black box uniform over its enabled set on failure.
struct JointValueTable {
  int num_control_states = 0;
  int num_env_states = 0;
  int num_actions = 0;
  std::vector<double> v;          // [control * num_env_states + env]
  std::vector<double> q;          // [(joint) * num_actions + action]; lowest() when disabled
  std::vector<double> residuals;  // max value change per sweep, for diagnostics

  double value(int control_state, int env_state) const;
  // lowest() for control actions not enabled at control_state
  double action_value(int control_state, int env_state, int action) const;
};

JointValueTable solve_joint_values(const Automaton& control, const Automaton& env,
                                   double gamma = 0.95, double eps = 1e-9);

// All enabled control actions whose action-value ties the maximum (1e-9).
std::vector<int> teacher(const JointValueTable& values, JointState s);

// Every enabled black-box action keeps the black box moving, so the expert
// recommends the whole enabled set; callers draw one uniformly if needed.
std::vector<int> expert(const Automaton& env, JointState s);

// One-step lookahead: inject iff firing beats coasting by more than the fuel
// it burns, measured in reward units. Ties keep the fuel.
bool teacher_lander(const LanderState& s, Engine engine);

void write_value_csv(std::ostream& out, const JointValueTable& values,
                     const Automaton& control, const Automaton& env);

}  // namespace qsc
