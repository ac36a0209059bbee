#pragma once

#include "qsc/automaton.hpp"
#include "qsc/lander.hpp"

namespace qsc {

struct JointState {
  int control_state = 0;
  int env_state = 0;
  bool operator==(const JointState&) const = default;
};

struct StepOutcome {
  JointState next;
  bool success = false;
  // the black box's own move when the control's action failed, else the agreed action
  int executed_env_action = -1;
};

// Agreement protocol: the joint step succeeds iff the control's action is
// enabled in the env state; on failure the control automaton does not move.
StepOutcome step_agreement(const Automaton& control, const Automaton& env,
                           JointState s, int a_c, int a_e);

struct LanderStepOutcome {
  LanderState next;
  bool fired = false;
};

// Restriction protocol: the control gates the operator's engine request.
// inject=false advances the physics with no thrust regardless of the request.
LanderStepOutcome step_restriction(const LanderState& s, Engine engine, bool inject);

}  // namespace qsc
