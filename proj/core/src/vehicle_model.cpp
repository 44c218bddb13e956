#include "c2te/vehicle_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "c2te/errors.hpp"

namespace c2te {

const char* to_string(Stage stage) {
  return stage == Stage::PreMerge ? "premerge" : "merge";
}

const char* to_string(Behavior behavior) {
  switch (behavior) {
    case Behavior::Normal: return "normal";
    case Behavior::Broken: return "broken";
    case Behavior::NonMerging: return "non_merging";
  }
  return "normal";
}

VehicleParams VehicleParams::with_base(double base_length) {
  VehicleParams params;
  params.base_length = base_length;
  params.virtual_offset = 0.1 * base_length;
  return params;
}

bool VehicleParams::valid() const {
  if (!(base_length > 0.0) || !(virtual_offset > 0.0)) return false;
  if (steer_limit && !(*steer_limit > 0.0 && *steer_limit < std::numbers::pi / 2)) {
    return false;
  }
  return std::isfinite(base_length) && std::isfinite(virtual_offset);
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = angle - two_pi * std::floor((angle + std::numbers::pi) / two_pi);
  // floor() rounding can land exactly on +pi
  if (wrapped >= std::numbers::pi) wrapped -= two_pi;
  if (wrapped < -std::numbers::pi) wrapped = -std::numbers::pi;
  return wrapped;
}

Point2 virtual_point(const VehicleState& state, const VehicleParams& params) {
  return {state.x + params.virtual_offset * std::cos(state.theta),
          state.y + params.virtual_offset * std::sin(state.theta)};
}

std::optional<Actuation> desired_to_actuation(const DesiredVelocity& u, double theta,
                                              const VehicleParams& params) {
  if (u.ux == 0.0 && u.uy == 0.0) return std::nullopt;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double v = u.ux * c + u.uy * s;
  const double yaw_term = (-u.ux * s + u.uy * c) / params.virtual_offset * params.base_length;
  // principal branch: reversing (v < 0) steers within (-pi/2, pi/2] too
  double psi = std::atan2(yaw_term, v);
  if (psi > std::numbers::pi / 2) psi -= std::numbers::pi;
  if (psi < -std::numbers::pi / 2) psi += std::numbers::pi;
  if (params.steer_limit) psi = std::clamp(psi, -*params.steer_limit, *params.steer_limit);
  return Actuation{v, psi};
}

DesiredVelocity virtual_point_rate(double v, double psi, double theta,
                                   const VehicleParams& params) {
  const double yaw_rate = v * std::tan(psi) / params.base_length;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v - params.virtual_offset * s * yaw_rate,
          s * v + params.virtual_offset * c * yaw_rate};
}

VehicleState integrate_vehicle(const VehicleState& state, double v, double psi, double dt,
                               const VehicleParams& params) {
  VehicleState next = state;
  next.x = state.x + v * std::cos(state.theta) * dt;
  next.y = state.y + v * std::sin(state.theta) * dt;
  next.theta = wrap_angle(state.theta + v * std::tan(psi) / params.base_length * dt);
  next.v = v;
  next.psi = psi;
  if (!std::isfinite(next.x) || !std::isfinite(next.y) || !std::isfinite(next.theta)) {
    std::ostringstream msg;
    msg << "vehicle " << state.id << " state became non-finite (v=" << v << ", psi=" << psi
        << ")";
    throw Error(ErrorKind::NonFinite, msg.str());
  }
  return next;
}

VirtualTarget integrate_target(const VirtualTarget& target, double dt) {
  VirtualTarget next = target;
  next.x = target.x + target.v * dt;
  return next;
}

}  // namespace c2te
