#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qsc/rng.hpp"

namespace qsc {

// Operator-side actions for the lander domain.
enum class Engine { Nothing = 0, Left = 1, Right = 2, Main = 3 };

const char* engine_name(Engine e);
Engine engine_from_name(const std::string& name);

struct LanderState {
  double x = 0.0;      // [-1, 1]
  double y = 0.0;      // [0, 1.5]
  double angle = 0.0;  // [-pi/2, pi/2]
  double vx = 0.0;     // [-2, 2]
  double vy = 0.0;     // [-2, 2]
  double omega = 0.0;  // [-2, 2]
};

enum class Terminal { Flying, Landed, Crashed };

namespace lander {

constexpr double dt = 0.1;
constexpr double gravity = 0.5;       // pulls vy down
constexpr double main_accel = 0.8;    // along the body axis
constexpr double side_spin = 0.4;     // added to omega per firing
constexpr double side_accel = 0.1;    // lateral accel while firing
constexpr double fuel_main = 0.3;
constexpr double fuel_side = 0.03;
constexpr int bins = 5;
constexpr int num_cells = 5 * 5 * 5 * 5 * 5 * 5;

}  // namespace lander

double fuel_cost(Engine e);  // cost charged when the engine actually fires

// One semi-implicit Euler step (velocities first, then positions), followed by
// clamping every feature to its declared range. fired=false ignores the engine.
LanderState physics_step(const LanderState& s, Engine engine, bool fired);

// Sign conventions (firing): left engine spins +omega and pushes +x,
// right engine spins -omega and pushes -x; main thrusts along
// (-sin(angle), cos(angle)), i.e. straight up when upright.

// 5 equal-width bins per feature; cell = sum b_i * 5^i over the fixed feature
// order (x, y, angle, vx, vy, omega). Range maxima land in the top bin.
int discretize(const LanderState& s);

// Scripted operator, noise-free part: correct tilt with the opposing side
// engine, fire main when descending faster than a height-dependent margin.
Engine operator_rule(const LanderState& s);
// Same rule, but with probability 0.05 the action is replaced by a uniform
// random one.
Engine operator_policy(const LanderState& s, Rng& rng);

double potential(const LanderState& s);

Terminal detect_terminal(const LanderState& s);

// Shaped reward for the transition s -> next: 100 * potential gain, minus fuel
// for the engine that fired, plus/minus 100 on touchdown.
double reward(const LanderState& s, const LanderState& next, bool fired, Engine engine);

// Fresh drop: x ~ U(-0.3, 0.3), y = 1.2, angle ~ U(-0.02, 0.02), at rest.
LanderState initial_state(Rng& rng);

struct TrajectoryRow {
  int step = 0;
  LanderState s;
  Engine engine = Engine::Nothing;
  bool inject = false;
  bool success = false;
  double reward = 0.0;
};

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

}  // namespace qsc
