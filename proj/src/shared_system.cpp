#include "qsc/shared_system.hpp"

#include <stdexcept>

namespace qsc {

StepOutcome step_agreement(const Automaton& control, const Automaton& env,
                           JointState s, int a_c, int a_e) {
  control.check_state(s.control_state);
  env.check_state(s.env_state);
  if (!control.is_enabled(s.control_state, a_c))
    throw std::invalid_argument("step_agreement: control action not enabled at (" +
                                control.states[s.control_state] + ", " +
                                env.states[s.env_state] + ")");
  if (!env.is_enabled(s.env_state, a_e))
    throw std::invalid_argument("step_agreement: env action not enabled at (" +
                                control.states[s.control_state] + ", " +
                                env.states[s.env_state] + ")");

  StepOutcome out;
  if (env.is_enabled(s.env_state, a_c)) {
    out.success = true;
    out.executed_env_action = a_c;
    out.next = {control.next(s.control_state, a_c), env.next(s.env_state, a_c)};
  } else {
    out.success = false;
    out.executed_env_action = a_e;
    out.next = {s.control_state, env.next(s.env_state, a_e)};
  }
  return out;
}

LanderStepOutcome step_restriction(const LanderState& s, Engine engine, bool inject) {
  LanderStepOutcome out;
  out.fired = inject && engine != Engine::Nothing;
  out.next = physics_step(s, engine, inject);
  return out;
}

}  // namespace qsc
