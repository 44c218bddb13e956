#include "c2te/cbf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "c2te/errors.hpp"

namespace c2te {

bool GammaSpec::valid() const {
  if (kind == Kind::Identity) return true;
  return gain > 0.0 && exponent > 0.0 && exponent < 1.0;
}

double sign0(double value) {
  return static_cast<double>((0.0 < value) - (value < 0.0));
}

PhiEval phi_long_regulation(double x_i, double x_ahead, double sensing_radius) {
  const double err = x_ahead - x_i - sensing_radius;
  return {err * err, -2.0 * err};
}

PhiEval phi_same_lane(double x_i, double x_l, double safe_radius) {
  if (x_i == x_l) {
    std::ostringstream msg;
    msg << "same-lane vehicles coincide at x=" << x_i;
    throw Error(ErrorKind::Coincident, msg.str());
  }
  const double diff = x_i - x_l;
  return {safe_radius - std::abs(diff), -sign0(diff)};
}

PhiEval phi_lateral(double y_i, double y_d) {
  const double diff = y_i - y_d;
  return {std::abs(diff), sign0(diff)};
}

PhiEval phi_target(double x_i, double x_d) {
  const double diff = x_i - x_d;
  return {std::abs(diff), sign0(diff)};
}

PhiEval phi_neighbor_ca(double x_i, double x_j, double safe_radius, double switch_radius) {
  const double diff = x_i - x_j;
  const double dist = std::abs(diff);
  if (dist <= safe_radius) {
    std::ostringstream msg;
    msg << "longitudinal distance " << dist << " reached the safe radius " << safe_radius;
    throw UnsafeError(0, 0, dist, msg.str());
  }
  const double den = std::max(dist - safe_radius, kDenominatorFloor);
  return {1.0 / den - 1.0 / (switch_radius - safe_radius), -sign0(diff) / (den * den)};
}

double gamma_eval(const GammaSpec& spec, double phi) {
  if (spec.kind == GammaSpec::Kind::Identity) return phi;
  if (phi == 0.0) return 0.0;
  return sign0(phi) * spec.gain * std::pow(std::abs(phi), spec.exponent);
}

}  // namespace c2te
