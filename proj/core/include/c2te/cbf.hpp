#pragma once

namespace c2te {

/// Task error and its derivative with respect to the vehicle's own
/// controlled coordinate.
struct PhiEval {
  double value = 0.0;
  double grad = 0.0;
};

/// Extended class-K function applied to task errors.
struct GammaSpec {
  enum class Kind { Identity, PowerLaw };
  Kind kind = Kind::Identity;
  double gain = 1.0;      // PowerLaw only, > 0
  double exponent = 0.5;  // PowerLaw only, in (0, 1)

  static GammaSpec identity() { return {}; }
  static GammaSpec power_law(double gain, double exponent) {
    return {Kind::PowerLaw, gain, exponent};
  }
  bool valid() const;
};

/// Lower clamp on |x_i - x_j| - r inside the neighbor collision term.
inline constexpr double kDenominatorFloor = 1e-9;

/// sign with sign(0) = 0.
double sign0(double value);

/// (x_ahead - x_i - R)^2: spacing to the vehicle ahead regulated toward R.
PhiEval phi_long_regulation(double x_i, double x_ahead, double sensing_radius);

/// r - |x_i - x_l|. Throws Error(Coincident) when x_i == x_l.
PhiEval phi_same_lane(double x_i, double x_l, double safe_radius);

/// |y_i - y_d|.
PhiEval phi_lateral(double y_i, double y_d);

/// |x_i - x_d|.
PhiEval phi_target(double x_i, double x_d);

/// 1/(|x_i - x_j| - r) - 1/(rho - r). Non-positive once the pair is at
/// least rho apart and unbounded as the pair approaches r.
/// Throws UnsafeError when |x_i - x_j| <= r.
PhiEval phi_neighbor_ca(double x_i, double x_j, double safe_radius, double switch_radius);

double gamma_eval(const GammaSpec& spec, double phi);

}  // namespace c2te
