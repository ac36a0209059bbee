#include "qsc/lander.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qsc/csv.hpp"

namespace qsc {

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

int bin_of(double v, double lo, double hi) {
  int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * lander::bins));
  return std::clamp(b, 0, lander::bins - 1);
}

}  // namespace

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Nothing: return "nothing";
    case Engine::Left: return "left";
    case Engine::Right: return "right";
    case Engine::Main: return "main";
  }
  return "nothing";
}

Engine engine_from_name(const std::string& name) {
  if (name == "nothing") return Engine::Nothing;
  if (name == "left") return Engine::Left;
  if (name == "right") return Engine::Right;
  if (name == "main") return Engine::Main;
  throw std::invalid_argument("unknown engine: " + name);
}

double fuel_cost(Engine e) {
  switch (e) {
    case Engine::Main: return lander::fuel_main;
    case Engine::Left:
    case Engine::Right: return lander::fuel_side;
    case Engine::Nothing: return 0.0;
  }
  return 0.0;
}

LanderState physics_step(const LanderState& s, Engine engine, bool fired) {
  double ax = 0.0;
  double ay = -lander::gravity;
  double spin = 0.0;
  if (fired) {
    switch (engine) {
      case Engine::Main:
        ax += lander::main_accel * -std::sin(s.angle);
        ay += lander::main_accel * std::cos(s.angle);
        break;
      case Engine::Left:
        spin = lander::side_spin;
        ax += lander::side_accel;
        break;
      case Engine::Right:
        spin = -lander::side_spin;
        ax -= lander::side_accel;
        break;
      case Engine::Nothing:
        break;
    }
  }

  LanderState n;
  n.vx = clamp(s.vx + ax * lander::dt, -2.0, 2.0);
  n.vy = clamp(s.vy + ay * lander::dt, -2.0, 2.0);
  n.omega = clamp(s.omega + spin, -2.0, 2.0);
  n.x = clamp(s.x + n.vx * lander::dt, -1.0, 1.0);
  n.y = clamp(s.y + n.vy * lander::dt, 0.0, 1.5);
  n.angle = clamp(s.angle + n.omega * lander::dt, -half_pi, half_pi);
  return n;
}

int discretize(const LanderState& s) {
  const int b[6] = {
      bin_of(s.x, -1.0, 1.0),        bin_of(s.y, 0.0, 1.5),
      bin_of(s.angle, -half_pi, half_pi), bin_of(s.vx, -2.0, 2.0),
      bin_of(s.vy, -2.0, 2.0),       bin_of(s.omega, -2.0, 2.0),
  };
  int cell = 0;
  int scale = 1;
  for (int i = 0; i < 6; ++i) {
    cell += b[i] * scale;
    scale *= lander::bins;
  }
  return cell;
}

// positive tilt spins counterclockwise toward the left, so the right engine
// (spin -0.4) opposes it
Engine operator_rule(const LanderState& s) {
  // falling dangerously fast: brake no matter the attitude
  if (s.vy < -0.3 - 0.5 * s.y) return Engine::Main;
  // level out before braking: a tilted main burn doubles as lateral thrust
  // and strafes the craft off the pad
  const double tilt = s.angle + 0.5 * s.omega;
  if (tilt > 0.15) return Engine::Right;
  if (tilt < -0.15) return Engine::Left;
  if (s.vy < -0.15 - 0.5 * s.y) return Engine::Main;
  return Engine::Nothing;
}

Engine operator_policy(const LanderState& s, Rng& rng) {
  Engine e = operator_rule(s);
  if (rng.uniform() < 0.05) e = static_cast<Engine>(rng.uniform_int(4));
  return e;
}

double potential(const LanderState& s) {
  return -(std::sqrt(s.x * s.x + s.y * s.y) + std::abs(s.vx) + std::abs(s.vy) +
           std::abs(s.angle));
}

Terminal detect_terminal(const LanderState& s) {
  if (s.y > 0.0) return Terminal::Flying;
  if (std::abs(s.x) < 0.1 && std::abs(s.vy) < 0.3 && std::abs(s.angle) < 0.2)
    return Terminal::Landed;
  return Terminal::Crashed;
}

double reward(const LanderState& s, const LanderState& next, bool fired, Engine engine) {
  double r = 100.0 * (potential(next) - potential(s));
  if (fired) {
    if (engine == Engine::Main) r -= lander::fuel_main;
    if (engine == Engine::Left || engine == Engine::Right) r -= lander::fuel_side;
  }
  switch (detect_terminal(next)) {
    case Terminal::Landed: r += 100.0; break;
    case Terminal::Crashed: r -= 100.0; break;
    case Terminal::Flying: break;
  }
  return r;
}

LanderState initial_state(Rng& rng) {
  LanderState s;
  s.x = rng.uniform(-0.3, 0.3);
  s.y = 1.2;
  // keep the starting tilt inside the operator's leveling deadband: the
  // 0.4-quantized side spin cannot trim smaller tilts, and an untrimmed
  // tilt turns every main burn into lateral thrust
  s.angle = rng.uniform(-0.02, 0.02);
  return s;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "step,x,y,angle,vx,vy,omega,engine,inject,success,reward\n";
  for (const auto& r : rows) {
    out << r.step << ',' << csv_num(r.s.x) << ',' << csv_num(r.s.y) << ','
        << csv_num(r.s.angle) << ',' << csv_num(r.s.vx) << ',' << csv_num(r.s.vy)
        << ',' << csv_num(r.s.omega) << ',' << engine_name(r.engine) << ','
        << (r.inject ? 1 : 0) << ',' << (r.success ? 1 : 0) << ','
        << csv_num(r.reward) << '\n';
  }
}

}  // namespace qsc
