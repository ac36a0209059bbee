#include <cmath>
#include <sstream>

#include "doctest.h"

#include "qsc/lander.hpp"
#include "qsc/rng.hpp"

using namespace qsc;
using doctest::Approx;

namespace {

LanderState at(double x, double y, double angle = 0.0, double vx = 0.0,
               double vy = 0.0, double omega = 0.0) {
  LanderState s;
  s.x = x;
  s.y = y;
  s.angle = angle;
  s.vx = vx;
  s.vy = vy;
  s.omega = omega;
  return s;
}

}  // namespace

TEST_CASE("engine names round trip") {
  for (Engine e : {Engine::Nothing, Engine::Left, Engine::Right, Engine::Main})
    CHECK(engine_from_name(engine_name(e)) == e);
  CHECK_THROWS_AS(engine_from_name("warp"), std::invalid_argument);
}

TEST_CASE("fuel cost per engine") {
  CHECK(fuel_cost(Engine::Nothing) == 0.0);
  CHECK(fuel_cost(Engine::Left) == Approx(0.03));
  CHECK(fuel_cost(Engine::Right) == Approx(0.03));
  CHECK(fuel_cost(Engine::Main) == Approx(0.3));
}

TEST_CASE("free fall") {
  const LanderState n = physics_step(at(0.0, 1.2), Engine::Nothing, false);
  CHECK(n.vy == Approx(-0.05).epsilon(1e-12));
  CHECK(n.y == Approx(1.195).epsilon(1e-12));
  CHECK(n.x == 0.0);
  CHECK(n.vx == 0.0);
  CHECK(n.angle == 0.0);
  CHECK(n.omega == 0.0);
}

TEST_CASE("upright main burn beats gravity") {
  const LanderState n = physics_step(at(0.0, 1.2), Engine::Main, true);
  // ay = -0.5 + 0.8 = 0.3
  CHECK(n.vy == Approx(0.03).epsilon(1e-12));
  CHECK(n.y == Approx(1.203).epsilon(1e-12));
  CHECK(n.vx == 0.0);
}

TEST_CASE("tilted main burn thrusts along the body axis") {
  const double angle = 0.5;
  const LanderState n = physics_step(at(0.0, 1.0, angle), Engine::Main, true);
  const double ax = 0.8 * -std::sin(angle);
  const double ay = -0.5 + 0.8 * std::cos(angle);
  CHECK(n.vx == Approx(ax * 0.1).epsilon(1e-12));
  CHECK(n.vy == Approx(ay * 0.1).epsilon(1e-12));
  CHECK(n.angle == Approx(angle).epsilon(1e-12));  // no spin from main
}

TEST_CASE("side engines spin and strafe") {
  const LanderState l = physics_step(at(0.0, 1.2), Engine::Left, true);
  CHECK(l.omega == Approx(0.4).epsilon(1e-12));
  CHECK(l.vx == Approx(0.01).epsilon(1e-12));
  CHECK(l.angle == Approx(0.04).epsilon(1e-12));  // integrates the new omega
  const LanderState r = physics_step(at(0.0, 1.2), Engine::Right, true);
  CHECK(r.omega == Approx(-0.4).epsilon(1e-12));
  CHECK(r.vx == Approx(-0.01).epsilon(1e-12));
  CHECK(r.angle == Approx(-0.04).epsilon(1e-12));
}

TEST_CASE("unfired engines have no effect") {
  const LanderState a = physics_step(at(0.1, 0.8), Engine::Main, false);
  const LanderState b = physics_step(at(0.1, 0.8), Engine::Nothing, false);
  CHECK(a.vx == b.vx);
  CHECK(a.vy == b.vy);
  CHECK(a.omega == b.omega);
}

TEST_CASE("integration is semi-implicit") {
  // position already feels this step's velocity change
  const LanderState n = physics_step(at(0.0, 1.2), Engine::Left, true);
  CHECK(n.x == Approx(0.001).epsilon(1e-12));
  CHECK(n.x != 0.0);
}

TEST_CASE("ranges clamp") {
  LanderState n = physics_step(at(0.0, 1.0, 0.0, 0.0, -1.98), Engine::Nothing, false);
  CHECK(n.vy == -2.0);
  n = physics_step(at(0.0, 0.001, 0.0, 0.0, -1.0), Engine::Nothing, false);
  CHECK(n.y == 0.0);
  n = physics_step(at(0.99, 1.0, 0.0, 2.0), Engine::Nothing, false);
  CHECK(n.x == 1.0);
  n = physics_step(at(0.0, 1.0, 1.5, 0.0, 0.0, 2.0), Engine::Nothing, false);
  CHECK(n.angle == Approx(std::acos(0.0)).epsilon(1e-12));  // pi/2
  n = physics_step(at(0.0, 1.0, 0.0, 0.0, 0.0, 1.9), Engine::Left, true);
  CHECK(n.omega == 2.0);
  n = physics_step(at(0.0, 1.49, 0.0, 0.0, 2.0), Engine::Nothing, false);
  CHECK(n.y == 1.5);
}

TEST_CASE("discretize bins and packs base 5") {
  // bins: x 0.4 wide from -1, y 0.3 from 0, angle pi/5 from -pi/2, v 0.8 from -2
  CHECK(discretize(at(-1.0, 0.0, -1.5, -2.0, -2.0, -2.0)) == 0);
  const int top = discretize(at(1.0, 1.5, 1.5707963267948966, 2.0, 2.0, 2.0));
  CHECK(top == lander::num_cells - 1);

  // all features centered: bins (2,0,2,2,2,2) when y = 0
  CHECK(discretize(at(0.0, 0.0)) == 2 + 0 * 5 + 2 * 25 + 2 * 125 + 2 * 625 + 2 * 3125);

  // handpicked bins (1,2,3,4,0,2) over the order x,y,angle,vx,vy,omega
  const LanderState s = at(-0.5, 0.7, 0.5, 1.5, -1.5, 0.0);
  CHECK(discretize(s) == 1 + 2 * 5 + 3 * 25 + 4 * 125 + 0 * 625 + 2 * 3125);

  // bin midpoints, plus range maxima staying in the top bin
  CHECK(discretize(at(-0.4, 0.0)) % 5 == 1);
  CHECK(discretize(at(0.4, 0.0)) % 5 == 3);
  CHECK(discretize(at(1.0, 0.0)) % 5 == 4);
  CHECK(discretize(at(0.0, 0.45)) / 5 % 5 == 1);
  CHECK(discretize(at(0.0, 1.5)) / 5 % 5 == 4);
}

TEST_CASE("potential is negative distance plus speeds plus tilt") {
  CHECK(potential(at(0.0, 0.0)) == 0.0);
  CHECK(potential(at(0.3, 0.4, 0.05, 0.1, -0.2)) == Approx(-0.85).epsilon(1e-12));
  CHECK(potential(at(-0.3, 0.4, -0.05, -0.1, 0.2)) == Approx(-0.85).epsilon(1e-12));
  CHECK(potential(at(0.0, 1.2)) == Approx(-1.2).epsilon(1e-12));
}

TEST_CASE("terminal detection") {
  CHECK(detect_terminal(at(0.0, 1e-9)) == Terminal::Flying);
  CHECK(detect_terminal(at(0.05, 0.0, 0.1, 0.5, -0.2)) == Terminal::Landed);
  CHECK(detect_terminal(at(-0.099, 0.0, -0.19, 0.0, 0.29)) == Terminal::Landed);
  // each limit is strict
  CHECK(detect_terminal(at(0.1, 0.0)) == Terminal::Crashed);
  CHECK(detect_terminal(at(0.0, 0.0, 0.0, 0.0, -0.3)) == Terminal::Crashed);
  CHECK(detect_terminal(at(0.0, 0.0, 0.2)) == Terminal::Crashed);
  CHECK(detect_terminal(at(0.5, 0.0)) == Terminal::Crashed);
}

TEST_CASE("reward decomposes into shaping, fuel and terminal bonus") {
  const LanderState s = at(0.1, 1.2, 0.0, 0.0, -0.4);
  const LanderState n = at(0.1, 1.15, 0.0, 0.0, -0.45);
  const double shaping = 100.0 * (potential(n) - potential(s));
  CHECK(reward(s, n, false, Engine::Nothing) == Approx(shaping).epsilon(1e-12));
  CHECK(reward(s, n, true, Engine::Main) == Approx(shaping - 0.3).epsilon(1e-12));
  CHECK(reward(s, n, true, Engine::Left) == Approx(shaping - 0.03).epsilon(1e-12));
  CHECK(reward(s, n, true, Engine::Right) == Approx(shaping - 0.03).epsilon(1e-12));
  CHECK(reward(s, n, true, Engine::Nothing) == Approx(shaping).epsilon(1e-12));
  // blocked request: no fuel even though an engine was named
  CHECK(reward(s, n, false, Engine::Main) == Approx(shaping).epsilon(1e-12));

  const LanderState down = at(0.05, 0.0, 0.0, 0.0, -0.1);
  const LanderState near = at(0.05, 1e-6, 0.0, 0.0, -0.1);
  CHECK(reward(s, down, false, Engine::Nothing) -
            reward(s, near, false, Engine::Nothing) ==
        Approx(100.0 + 100.0 * (potential(down) - potential(near))).epsilon(1e-9));
  const LanderState smash = at(0.5, 0.0, 0.0, 0.0, -1.0);
  const LanderState miss = at(0.5, 1e-6, 0.0, 0.0, -1.0);
  CHECK(reward(s, smash, false, Engine::Nothing) -
            reward(s, miss, false, Engine::Nothing) ==
        Approx(-100.0 + 100.0 * (potential(smash) - potential(miss))).epsilon(1e-9));
}

TEST_CASE("operator rule") {
  CHECK(operator_rule(at(0.0, 1.2)) == Engine::Nothing);
  CHECK(operator_rule(at(0.0, 1.0, 0.4)) == Engine::Right);
  CHECK(operator_rule(at(0.0, 1.0, -0.4)) == Engine::Left);
  // tilt blends in the spin rate
  CHECK(operator_rule(at(0.0, 1.0, 0.0, 0.0, 0.0, 0.4)) == Engine::Right);
  CHECK(operator_rule(at(0.0, 1.0, 0.0, 0.0, 0.0, -0.4)) == Engine::Left);
  // half the spin cancels the tilt: inside the deadband
  CHECK(operator_rule(at(0.0, 1.0, 0.1, 0.0, 0.0, -0.4)) == Engine::Nothing);
  // emergency brake wins over attitude
  CHECK(operator_rule(at(0.0, 0.2, 0.4, 0.0, -1.0)) == Engine::Main);
  // gentle braking margin shrinks with altitude
  CHECK(operator_rule(at(0.0, 0.0, 0.0, 0.0, -0.2)) == Engine::Main);
  CHECK(operator_rule(at(0.0, 1.0, 0.0, 0.0, -0.6)) == Engine::Nothing);
  CHECK(operator_rule(at(0.0, 1.0, 0.0, 0.0, -0.7)) == Engine::Main);
  // deadband boundary is strict
  CHECK(operator_rule(at(0.0, 1.0, 0.15)) == Engine::Nothing);
}

TEST_CASE("operator policy is the rule plus a 5 pct random slip") {
  Rng used(7), replica(7);
  int slips = 0;
  for (int i = 0; i < 2000; ++i) {
    const LanderState s = at(0.0, 1.0, 0.0, 0.0, -0.1 * (i % 12));
    const Engine got = operator_policy(s, used);
    Engine want = operator_rule(s);
    if (replica.uniform() < 0.05) {
      want = static_cast<Engine>(replica.uniform_int(4));
      ++slips;
    }
    REQUIRE(got == want);
  }
  CHECK(slips > 50);
  CHECK(slips < 150);
}

TEST_CASE("initial state drops from the same sill") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const LanderState s = initial_state(rng);
    CHECK(s.y == 1.2);
    CHECK(std::abs(s.x) <= 0.3);
    CHECK(std::abs(s.angle) <= 0.02);
    CHECK(s.vx == 0.0);
    CHECK(s.vy == 0.0);
    CHECK(s.omega == 0.0);
  }
}

TEST_CASE("trajectory csv") {
  std::ostringstream out;
  TrajectoryRow row;
  row.step = 1;
  row.s = at(0.5, 1.0, 0.0, 0.0, -0.25);
  row.engine = Engine::Main;
  row.inject = true;
  row.success = false;
  row.reward = -2.5;
  write_trajectory_csv(out, {row});
  CHECK(out.str() ==
        "step,x,y,angle,vx,vy,omega,engine,inject,success,reward\n"
        "1,0.5,1,0,0,-0.25,0,main,1,0,-2.5\n");
}
