#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ffsim/physics/body.hpp"

using namespace ffsim::physics;
using ffsim::mothership::MissionParams;

namespace {

WorldState single_push_world(double mass, double inertia, Vec2 point,
                             double force, double start_ms, double dur_ms) {
  WorldState w;
  w.debris.mass_kg = mass;
  w.debris.inertia_kgm2 = inertia;
  w.active_pushes.push_back(PushCommand{point, force, {0.0, 1.0}, start_ms, dur_ms});
  return w;
}

}  // namespace

TEST_CASE("step: debris at rest stays at rest") {
  WorldState w;
  for (int i = 0; i < 100; ++i) step(w, 1.0);
  CHECK(w.debris.pose.x == 0.0);
  CHECK(w.debris.pose.y == 0.0);
  CHECK(w.debris.pose.theta == 0.0);
  CHECK(w.debris.velocity.omega == 0.0);
}

TEST_CASE("step: rejects non-positive dt") {
  WorldState w;
  CHECK_THROWS_AS(step(w, 0.0), PhysicsError);
}

TEST_CASE("momentum is conserved exactly with no pushes") {
  WorldState w;
  w.debris.velocity = {0.25, -0.5, 0.75};
  for (int i = 0; i < 2000; ++i) step(w, 1.0);
  CHECK(w.debris.velocity.vx == 0.25);
  CHECK(w.debris.velocity.vy == -0.5);
  CHECK(w.debris.velocity.omega == 0.75);
}

TEST_CASE("central push: F=1N through the center of a 1 kg body for 1 s") {
  WorldState w = single_push_world(1.0, 0.05, {0.0, 0.0}, 1.0, 0.0, 1000.0);
  integrate(w, 1000.0);
  CHECK(w.debris.velocity.vy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.debris.velocity.vx == 0.0);
  CHECK(w.debris.velocity.omega == 0.0);
}

TEST_CASE("offset push torque: impulse-momentum closed form") {
  // 0.1 m lever arm, 1 N, 0.5 s on I = 0.05: omega = 0.1*1*0.5/0.05 = 1 rad/s.
  WorldState w = single_push_world(1.0, 0.05, {0.1, 0.0}, 1.0, 0.0, 500.0);
  integrate(w, 500.0);
  CHECK(w.debris.velocity.omega == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("run_push_scenario: synchronized pushes translate without rotation") {
  PushOutcome out = run_push_scenario(MissionParams{40, 1500}, 0.0, 0.0,
                                      PushGeometry{});
  CHECK(std::fabs(out.final_pose.theta) < 1e-9);
  CHECK(std::fabs(out.final_pose.x) < 1e-9);
  CHECK(out.final_pose.y > 0.0);
  CHECK(std::fabs(out.peak_omega) < 1e-12);

  // v = 2 * F * t / m with F = 0.4 * 0.5 N, t = 1.5 s, m = 12 kg.
  CHECK(out.final_velocity.vy == doctest::Approx(2.0 * 0.2 * 1.5 / 12.0).epsilon(1e-9));
}

TEST_CASE("run_push_scenario: 21.2 ms desynchronization, peak omega closed form") {
  const double delta_ms = 21.2;
  PushOutcome out = run_push_scenario(MissionParams{40, 1500}, 0.0, delta_ms,
                                      PushGeometry{});
  const double force = 0.5 * 40.0 / 100.0;
  const double expected = force * 0.11 * (delta_ms / 1000.0) / 0.1;
  CHECK(out.peak_omega == doctest::Approx(expected).epsilon(0.02));

  // Fine-step oracle at dt = 0.1 ms agrees.
  PushGeometry fine;
  fine.dt_ms = 0.1;
  PushOutcome ref = run_push_scenario(MissionParams{40, 1500}, 0.0, delta_ms, fine);
  CHECK(ref.peak_omega == doctest::Approx(expected).epsilon(0.02));
  CHECK(out.peak_omega == doctest::Approx(ref.peak_omega).epsilon(0.02));
}

TEST_CASE("run_push_scenario: zero force leaves the debris stationary") {
  PushOutcome out = run_push_scenario(MissionParams{0, 1500}, 0.0, 0.0,
                                      PushGeometry{});
  CHECK(out.final_pose.x == 0.0);
  CHECK(out.final_pose.y == 0.0);
  CHECK(out.final_pose.theta == 0.0);
}

TEST_CASE("run_push_scenario: asymmetric geometry rejected") {
  PushGeometry bad;
  bad.slave_point = {-0.09, 0.0};
  CHECK_THROWS_AS(run_push_scenario(MissionParams{40, 1500}, 0.0, 0.0, bad),
                  PhysicsError);
  PushGeometry tilted;
  tilted.direction = {0.0, 2.0};
  CHECK_THROWS_AS(run_push_scenario(MissionParams{40, 1500}, 0.0, 0.0, tilted),
                  PhysicsError);
}

TEST_CASE("translation scales linearly with force magnitude") {
  std::mt19937_64 rng(17);
  PushOutcome unit = run_push_scenario(MissionParams{10, 1000}, 0.0, 0.0,
                                       PushGeometry{});
  for (int i = 0; i < 20; ++i) {
    unsigned speed = 10 + static_cast<unsigned>(rng() % 91);
    if (speed > 100) speed = 100;
    PushOutcome out = run_push_scenario(MissionParams{speed, 1000}, 0.0, 0.0,
                                        PushGeometry{});
    double ratio = static_cast<double>(speed) / 10.0;
    CHECK(out.final_pose.y == doctest::Approx(unit.final_pose.y * ratio).epsilon(1e-9));
    CHECK(out.final_velocity.vy ==
          doctest::Approx(unit.final_velocity.vy * ratio).epsilon(1e-9));
  }
}

TEST_CASE("halving dt changes the final pose by less than one percent") {
  PushGeometry coarse;
  coarse.dt_ms = 1.0;
  PushGeometry half;
  half.dt_ms = 0.5;
  PushOutcome a = run_push_scenario(MissionParams{40, 1500}, 0.0, 21.2, coarse);
  PushOutcome b = run_push_scenario(MissionParams{40, 1500}, 0.0, 21.2, half);
  CHECK(std::fabs(a.final_pose.y - b.final_pose.y) <
        0.01 * std::fabs(b.final_pose.y));
  CHECK(std::fabs(a.final_pose.x - b.final_pose.x) < 1e-6);
}

TEST_CASE("mirror symmetry: swapping sides negates the rotation") {
  PushGeometry geo;
  PushOutcome a = run_push_scenario(MissionParams{40, 1500}, 0.0, 21.2, geo);

  PushGeometry mirrored = geo;
  mirrored.master_point = {-0.11, 0.0};
  mirrored.slave_point = {0.11, 0.0};
  PushOutcome b = run_push_scenario(MissionParams{40, 1500}, 0.0, 21.2, mirrored);

  CHECK(b.final_pose.theta == doctest::Approx(-a.final_pose.theta).epsilon(1e-9));
  CHECK(b.final_pose.y == doctest::Approx(a.final_pose.y).epsilon(1e-9));
}

TEST_CASE("non-finite states abort with a diagnostic") {
  WorldState w;
  w.debris.velocity.vx = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(step(w, 1.0), PhysicsError);
}

TEST_CASE("trajectory sampling covers the run") {
  WorldState w = single_push_world(1.0, 0.05, {0.0, 0.0}, 1.0, 100.0, 300.0);
  std::vector<TrajectorySample> samples;
  integrate(w, 500.0, &samples);
  REQUIRE(!samples.empty());
  CHECK(samples.front().t_ms == 0.0);
  CHECK(samples.back().t_ms == doctest::Approx(500.0));
  // Monotone time.
  for (std::size_t i = 1; i < samples.size(); ++i)
    CHECK(samples[i].t_ms > samples[i - 1].t_ms);
}
