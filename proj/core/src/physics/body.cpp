#include "ffsim/physics/body.hpp"

#include <algorithm>
#include <cmath>

namespace ffsim::physics {

namespace {

bool finite(const WorldState& w) {
  const RigidBody2D& b = w.debris;
  return std::isfinite(b.pose.x) && std::isfinite(b.pose.y) &&
         std::isfinite(b.pose.theta) && std::isfinite(b.velocity.vx) &&
         std::isfinite(b.velocity.vy) && std::isfinite(b.velocity.omega);
}

}  // namespace

void step(WorldState& world, double dt_ms) {
  if (dt_ms <= 0.0) throw PhysicsError("step: dt must be positive");
  RigidBody2D& body = world.debris;
  const double dt = dt_ms / 1000.0;
  const double c = std::cos(body.pose.theta);
  const double s = std::sin(body.pose.theta);

  double fx = 0.0, fy = 0.0, torque = 0.0;
  for (const PushCommand& push : world.active_pushes) {
    // Window sampled at the step start; callers split steps on boundaries.
    if (world.t_ms < push.start_ms || world.t_ms >= push.end_ms()) continue;
    double fbx = push.direction.x * push.force_n;
    double fby = push.direction.y * push.force_n;
    // Body frame -> world frame.
    double fwx = c * fbx - s * fby;
    double fwy = s * fbx + c * fby;
    double rwx = c * push.body_point.x - s * push.body_point.y;
    double rwy = s * push.body_point.x + c * push.body_point.y;
    fx += fwx;
    fy += fwy;
    torque += rwx * fwy - rwy * fwx;
  }

  body.velocity.vx += fx / body.mass_kg * dt;
  body.velocity.vy += fy / body.mass_kg * dt;
  body.velocity.omega += torque / body.inertia_kgm2 * dt;
  body.pose.x += body.velocity.vx * dt;
  body.pose.y += body.velocity.vy * dt;
  body.pose.theta += body.velocity.omega * dt;
  world.t_ms += dt_ms;

  if (!finite(world))
    throw PhysicsError("non-finite debris state at t=" + std::to_string(world.t_ms));
}

double integrate(WorldState& world, double t_end_ms,
                 std::vector<TrajectorySample>* trajectory) {
  if (world.dt_ms <= 0.0) throw PhysicsError("integrate: dt must be positive");

  // Push window edges where the force function is discontinuous.
  std::vector<double> edges;
  for (const PushCommand& p : world.active_pushes) {
    edges.push_back(p.start_ms);
    edges.push_back(p.end_ms());
  }
  std::sort(edges.begin(), edges.end());

  double peak_omega = std::fabs(world.debris.velocity.omega);
  if (trajectory)
    trajectory->push_back({world.t_ms, world.debris.pose, world.debris.velocity});

  while (world.t_ms < t_end_ms - 1e-12) {
    double next = world.t_ms + world.dt_ms;
    for (double e : edges) {
      if (e > world.t_ms + 1e-12 && e < next - 1e-12) {
        next = e;
        break;
      }
    }
    next = std::min(next, t_end_ms);
    step(world, next - world.t_ms);
    world.t_ms = next;  // avoid accumulation drift on split steps
    peak_omega = std::max(peak_omega, std::fabs(world.debris.velocity.omega));
    if (trajectory)
      trajectory->push_back({world.t_ms, world.debris.pose, world.debris.velocity});
  }
  return peak_omega;
}

PushOutcome run_push_scenario(const mothership::MissionParams& params,
                              double master_delta_ms, double slave_delta_ms,
                              const PushGeometry& geometry,
                              const RigidBody2D& debris) {
  if (std::fabs(geometry.master_point.x + geometry.slave_point.x) > 1e-12 ||
      std::fabs(geometry.master_point.y + geometry.slave_point.y) > 1e-12)
    throw PhysicsError("push scenario requires mirror-symmetric contact points");
  double norm = std::hypot(geometry.direction.x, geometry.direction.y);
  if (std::fabs(norm - 1.0) > 1e-9)
    throw PhysicsError("push direction must be a unit vector");
  if (!params.valid()) throw PhysicsError("invalid mission parameters");

  const double force = geometry.force_max_n *
                       static_cast<double>(params.motor_speed) / 100.0;
  const double len = static_cast<double>(params.mission_length_ms);

  WorldState world;
  world.debris = debris;
  world.dt_ms = geometry.dt_ms;
  world.t_ms = std::min({0.0, master_delta_ms, slave_delta_ms});
  world.active_pushes.push_back(PushCommand{
      geometry.master_point, force, geometry.direction, master_delta_ms, len});
  world.active_pushes.push_back(PushCommand{
      geometry.slave_point, force, geometry.direction, slave_delta_ms, len});

  double t_end = std::max(master_delta_ms, slave_delta_ms) + len;
  PushOutcome out;
  out.peak_omega = integrate(world, t_end);
  out.final_pose = world.debris.pose;
  out.final_velocity = world.debris.velocity;
  return out;
}

}  // namespace ffsim::physics
