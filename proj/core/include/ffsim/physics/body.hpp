#pragma once

#include <stdexcept>
#include <vector>

#include "ffsim/mothership/payload.hpp"

namespace ffsim::physics {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Pose {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad
};

struct Velocity {
  double vx = 0.0;     // m/s
  double vy = 0.0;
  double omega = 0.0;  // rad/s
};

struct RigidBody2D {
  double mass_kg = 12.0;
  double inertia_kgm2 = 0.1;
  Pose pose;
  Velocity velocity;
};

/// A timed external force applied at a fixed point of the debris body frame.
struct PushCommand {
  Vec2 body_point;        // contact point, body frame (m)
  double force_n = 0.0;
  Vec2 direction{0.0, 1.0};  // unit vector, body frame
  double start_ms = 0.0;     // window on the integration timeline
  double duration_ms = 0.0;

  double end_ms() const { return start_ms + duration_ms; }
};

struct WorldState {
  RigidBody2D debris;
  std::vector<PushCommand> active_pushes;
  double dt_ms = 1.0;
  double t_ms = 0.0;
};

class PhysicsError : public std::runtime_error {
public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

/// One semi-implicit Euler step: sum world-frame forces and torques of the
/// pushes whose window contains the current time, integrate velocity, then
/// pose. Throws PhysicsError when the state leaves the finite range.
void step(WorldState& world, double dt_ms);

struct TrajectorySample {
  double t_ms;
  Pose pose;
  Velocity velocity;
};

/// Integrates up to t_end, splitting steps at push window boundaries so
/// piecewise-constant force windows are integrated exactly. Records one
/// sample per step when `trajectory` is non-null. Returns peak |omega|.
double integrate(WorldState& world, double t_end_ms,
                 std::vector<TrajectorySample>* trajectory = nullptr);

struct PushGeometry {
  Vec2 master_point{0.11, 0.0};
  Vec2 slave_point{-0.11, 0.0};
  Vec2 direction{0.0, 1.0};  // shared push direction, body frame
  double force_max_n = 0.5;  // thrust at 100 percent motor speed
  double dt_ms = 1.0;
};

struct PushOutcome {
  Pose final_pose;
  Velocity final_velocity;
  double peak_omega = 0.0;
};

/// Runs the two-pusher mission: both free-flyers push the debris in the same
/// direction from mirror-symmetric contact points, each within its own
/// actuation window offset by (master_delta, slave_delta) milliseconds.
/// Rejects geometries that are not mirror-symmetric about the debris center.
PushOutcome run_push_scenario(const mothership::MissionParams& params,
                              double master_delta_ms, double slave_delta_ms,
                              const PushGeometry& geometry,
                              const RigidBody2D& debris = RigidBody2D{});

}  // namespace ffsim::physics
