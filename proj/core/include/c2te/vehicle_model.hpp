#pragma once

#include <optional>

namespace c2te {

/// Merge stage of one vehicle. The switch PreMerge -> Merge latches.
enum class Stage { PreMerge, Merge };

enum class Behavior { Normal, Broken, NonMerging };

const char* to_string(Stage stage);
const char* to_string(Behavior behavior);

struct VehicleParams {
  double base_length = 2.0;     // wheel base B [m]
  double virtual_offset = 0.2;  // distance d of the virtual point [m]
  std::optional<double> steer_limit;  // |psi| clamp [rad], disabled when empty

  /// Default geometry: d = 0.1 * B.
  static VehicleParams with_base(double base_length);

  bool valid() const;
};

struct VehicleState {
  int id = 0;
  double x = 0.0;      // [m]
  double y = 0.0;      // [m]
  double theta = 0.0;  // yaw [rad], kept in [-pi, pi)
  double v = 0.0;      // body speed [m/s]
  double psi = 0.0;    // front-wheel steering [rad]
  int lane0 = 0;       // lane index at t = 0 (or at appearance)
  Stage stage = Stage::PreMerge;
  Behavior behavior = Behavior::Normal;
  /// Longitudinal speed held by a NonMerging vehicle; falls back to the
  /// platoon speed when unset.
  std::optional<double> cruise_speed;
};

/// Fictitious lead point on the desired lane.
struct VirtualTarget {
  double x = 0.0;  // [m]
  double y = 0.0;  // [m]
  double v = 0.0;  // [m/s], >= 0
};

/// Desired planar rates of the virtual point.
struct DesiredVelocity {
  double ux = 0.0;  // longitudinal [m/s]
  double uy = 0.0;  // lateral [m/s]
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Actuation {
  double v = 0.0;    // [m/s]
  double psi = 0.0;  // [rad]
};

/// Wraps an angle into [-pi, pi).
double wrap_angle(double angle);

/// Point at distance d ahead of the rear-axle reference along the heading.
Point2 virtual_point(const VehicleState& state, const VehicleParams& params);

/// Inverts the virtual-point kinematics: the body speed and steering angle
/// that move the virtual point at `u`. Returns std::nullopt when u = (0, 0);
/// the caller then holds v = 0 and keeps the previous steering angle.
std::optional<Actuation> desired_to_actuation(const DesiredVelocity& u, double theta,
                                              const VehicleParams& params);

/// Virtual-point velocity produced by (v, psi) at heading theta. Forward map
/// of desired_to_actuation.
DesiredVelocity virtual_point_rate(double v, double psi, double theta,
                                   const VehicleParams& params);

/// One explicit-Euler step of the kinematic bicycle model. Stores v and psi
/// in the returned state. Throws Error(NonFinite) on overflow.
VehicleState integrate_vehicle(const VehicleState& state, double v, double psi,
                               double dt, const VehicleParams& params);

VirtualTarget integrate_target(const VirtualTarget& target, double dt);

}  // namespace c2te
