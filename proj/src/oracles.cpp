#include "qsc/oracles.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "qsc/csv.hpp"

namespace qsc {

namespace {
constexpr double disabled_q = std::numeric_limits<double>::lowest();
}

double JointValueTable::value(int control_state, int env_state) const {
  return v[static_cast<std::size_t>(control_state) * num_env_states + env_state];
}

double JointValueTable::action_value(int control_state, int env_state, int action) const {
  const std::size_t joint = static_cast<std::size_t>(control_state) * num_env_states + env_state;
  return q[joint * num_actions + action];
}

JointValueTable solve_joint_values(const Automaton& control, const Automaton& env,
                                   double gamma, double eps) {
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("solve_joint_values: gamma must be in (0, 1)");

  JointValueTable t;
  t.num_control_states = control.num_states();
  t.num_env_states = env.num_states();
  t.num_actions = control.num_actions();
  const std::size_t joints =
      static_cast<std::size_t>(t.num_control_states) * t.num_env_states;
  t.v.assign(joints, 0.0);
  t.q.assign(joints * t.num_actions, disabled_q);

  std::vector<double> next_v(joints, 0.0);
  while (true) {
    double residual = 0.0;
    for (int sc = 0; sc < t.num_control_states; ++sc) {
      for (int se = 0; se < t.num_env_states; ++se) {
        const std::size_t joint = static_cast<std::size_t>(sc) * t.num_env_states + se;
        const auto env_enabled = env.enabled(se);
        double best = disabled_q;
        for (int a : control.enabled(sc)) {
          double qa;
          if (env.is_enabled(se, a)) {
            const std::size_t nj =
                static_cast<std::size_t>(control.next(sc, a)) * t.num_env_states +
                env.next(se, a);
            qa = 1.0 + gamma * t.v[nj];
          } else {
            double avg = 0.0;
            for (int ae : env_enabled)
              avg += t.v[static_cast<std::size_t>(sc) * t.num_env_states + env.next(se, ae)];
            qa = gamma * avg / env_enabled.size();
          }
          t.q[joint * t.num_actions + a] = qa;
          best = std::max(best, qa);
        }
        next_v[joint] = best == disabled_q ? 0.0 : best;
        residual = std::max(residual, std::abs(next_v[joint] - t.v[joint]));
      }
    }
    t.v.swap(next_v);
    t.residuals.push_back(residual);
    if (residual < eps) break;
  }
  // one more pass so q is consistent with the converged v
  for (int sc = 0; sc < t.num_control_states; ++sc) {
    for (int se = 0; se < t.num_env_states; ++se) {
      const std::size_t joint = static_cast<std::size_t>(sc) * t.num_env_states + se;
      const auto env_enabled = env.enabled(se);
      for (int a : control.enabled(sc)) {
        double qa;
        if (env.is_enabled(se, a)) {
          const std::size_t nj =
              static_cast<std::size_t>(control.next(sc, a)) * t.num_env_states +
              env.next(se, a);
          qa = 1.0 + gamma * t.v[nj];
        } else {
          double avg = 0.0;
          for (int ae : env_enabled)
            avg += t.v[static_cast<std::size_t>(sc) * t.num_env_states + env.next(se, ae)];
          qa = gamma * avg / env_enabled.size();
        }
        t.q[joint * t.num_actions + a] = qa;
      }
    }
  }
  return t;
}

std::vector<int> teacher(const JointValueTable& values, JointState s) {
  double best = disabled_q;
  for (int a = 0; a < values.num_actions; ++a)
    best = std::max(best, values.action_value(s.control_state, s.env_state, a));
  if (best == disabled_q)
    throw std::invalid_argument("teacher: no enabled control action");
  std::vector<int> out;
  for (int a = 0; a < values.num_actions; ++a) {
    const double qa = values.action_value(s.control_state, s.env_state, a);
    if (qa > disabled_q / 2 && qa >= best - 1e-9) out.push_back(a);
  }
  return out;
}

std::vector<int> expert(const Automaton& env, JointState s) {
  return env.enabled(s.env_state);
}

bool teacher_lander(const LanderState& s, Engine engine) {
  const LanderState fired = physics_step(s, engine, true);
  const LanderState coast = physics_step(s, engine, false);
  return 100.0 * (potential(fired) - potential(coast)) > fuel_cost(engine);
}

void write_value_csv(std::ostream& out, const JointValueTable& values,
                     const Automaton& control, const Automaton& env) {
  out << "control_state,env_state,value,best_actions\n";
  for (int sc = 0; sc < values.num_control_states; ++sc) {
    for (int se = 0; se < values.num_env_states; ++se) {
      out << control.states[sc] << ',' << env.states[se] << ','
          << csv_num(values.value(sc, se)) << ',';
      const auto best = teacher(values, {sc, se});
      for (std::size_t i = 0; i < best.size(); ++i) {
        if (i) out << ';';
        out << control.actions[best[i]];
      }
      out << '\n';
    }
  }
}

}  // namespace qsc
