#include "doctest.h"

#include "qsc/shared_system.hpp"

using namespace qsc;

namespace {

// reference executor, straight off the transition tables
StepOutcome slow_agreement(const Automaton& ctrl, const Automaton& env,
                           JointState s, int a_c, int a_e) {
  StepOutcome out;
  if (env.next_state[s.env_state][a_c] >= 0) {
    out.success = true;
    out.executed_env_action = a_c;
    out.next = {ctrl.next_state[s.control_state][a_c],
                env.next_state[s.env_state][a_c]};
  } else {
    out.success = false;
    out.executed_env_action = a_e;
    out.next = {s.control_state, env.next_state[s.env_state][a_e]};
  }
  return out;
}

}  // namespace

TEST_CASE("agreement matches the reference executor on every tuple") {
  for (const AutomatonPair& p : {make_cases(), make_strategy(), make_combination_lock()}) {
    CAPTURE(p.control.name);
    int tuples = 0;
    for (int sc = 0; sc < p.control.num_states(); ++sc) {
      for (int se = 0; se < p.env.num_states(); ++se) {
        for (int a_c : p.control.enabled(sc)) {
          for (int a_e : p.env.enabled(se)) {
            const JointState s{sc, se};
            const StepOutcome got = step_agreement(p.control, p.env, s, a_c, a_e);
            const StepOutcome want = slow_agreement(p.control, p.env, s, a_c, a_e);
            REQUIRE(got.success == want.success);
            REQUIRE(got.next == want.next);
            REQUIRE(got.executed_env_action == want.executed_env_action);
            ++tuples;
          }
        }
      }
    }
    CHECK(tuples > 0);
  }
}

TEST_CASE("agreement semantics at a forced fault") {
  const AutomatonPair p = make_cases();
  const int a = 0, b = 1;
  // initial joint state: control only has a, env only accepts b or c
  const JointState s{p.control.initial, p.env.initial};
  const StepOutcome out = step_agreement(p.control, p.env, s, a, b);
  CHECK_FALSE(out.success);
  CHECK(out.executed_env_action == b);
  CHECK(out.next.control_state == s.control_state);  // control holds position
  CHECK(out.next.env_state == p.env.state_id("e1"));
}

TEST_CASE("agreement rejects disabled inputs") {
  const AutomatonPair p = make_cases();
  const int b = 1, c = 2;
  CHECK_THROWS_AS(step_agreement(p.control, p.env, {0, 0}, b, b),
                  std::invalid_argument);  // b disabled at c0
  CHECK_THROWS_AS(step_agreement(p.control, p.env, {1, 1}, c, c),
                  std::invalid_argument);  // c disabled at e1
  CHECK_THROWS_AS(step_agreement(p.control, p.env, {9, 0}, 0, 0),
                  std::out_of_range);
}

TEST_CASE("restriction fires only when an injected request has an engine") {
  LanderState s;
  s.y = 1.0;
  for (Engine e : {Engine::Nothing, Engine::Left, Engine::Right, Engine::Main}) {
    for (bool inject : {false, true}) {
      const LanderStepOutcome out = step_restriction(s, e, inject);
      const bool want_fired = inject && e != Engine::Nothing;
      CHECK(out.fired == want_fired);
      const LanderState ref = physics_step(s, e, want_fired);
      CHECK(out.next.x == ref.x);
      CHECK(out.next.y == ref.y);
      CHECK(out.next.angle == ref.angle);
      CHECK(out.next.vx == ref.vx);
      CHECK(out.next.vy == ref.vy);
      CHECK(out.next.omega == ref.omega);
    }
  }
}

TEST_CASE("blocked requests coast") {
  LanderState s;
  s.y = 1.0;
  s.vy = -0.5;
  const LanderStepOutcome blocked = step_restriction(s, Engine::Main, false);
  const LanderStepOutcome coast = step_restriction(s, Engine::Nothing, true);
  CHECK_FALSE(blocked.fired);
  CHECK_FALSE(coast.fired);
  CHECK(blocked.next.vy == coast.next.vy);
  CHECK(blocked.next.vy == doctest::Approx(-0.55));
}
