#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "c2te/cbf.hpp"

namespace c2te {

/// One linear constraint on the scalar decision u:
///   a * (u - w) + b <= delta   (slacked rows, delta penalised by c * delta^2)
///   a * (u - w) + b <= 0       (hard rows)
/// For a CBF row, a is the task-error gradient and b = gamma(phi).
struct ConstraintRow {
  double a = 0.0;
  double b = 0.0;
  double w = 0.0;
  bool slacked = true;

  /// Evaluated with the rounding error of u - w carried through an fma, so
  /// the value near a root is accurate to a few ulps of the result.
  double residual(double u) const {
    const double s = u - w;
    const double z = s - u;
    const double e = (u - (s - z)) - (w + z);
    return std::fma(a, s, b) + a * e;
  }
};

/// min_u,delta (u - u_ref)^2 + c * sum(delta_k^2) subject to `rows`.
struct SlackQp {
  double u_ref = 0.0;
  double c = 1.0;
  std::vector<ConstraintRow> rows;
};

enum class QpStatus { Optimal, InfeasibleHard };

const char* to_string(QpStatus status);

/// Feasible interval of u implied by the hard rows alone.
struct HardInterval {
  double lower;
  double upper;
  /// A hard row with a = 0 and b > 0 cannot be satisfied by any u.
  bool degenerate_conflict = false;

  bool empty() const { return degenerate_conflict || lower > upper; }
};

struct QpSolution {
  QpStatus status = QpStatus::Optimal;
  double u = 0.0;
  std::vector<double> deltas;       // per row; always 0 for hard rows
  std::vector<double> multipliers;  // per row, >= 0
  std::vector<std::size_t> active_set;
  double objective = 0.0;
  HardInterval hard{};
};

/// Maximum number of rows solve_active_set will enumerate over.
inline constexpr std::size_t kMaxEnumerationRows = 24;

HardInterval hard_interval(const SlackQp& qp);

/// Objective with every slack at its optimal value for the given u.
double reduced_objective(const SlackQp& qp, double u);

/// Exact solve by KKT active-set enumeration: candidate sets are visited by
/// increasing cardinality, then lexicographically, and the first one whose
/// multipliers are non-negative and whose inactive rows hold is returned.
/// Throws Error(EnumerationLimit) above kMaxEnumerationRows rows.
QpSolution solve_active_set(const SlackQp& qp);

/// Independent reference: slacks are eliminated in closed form and the
/// remaining one-dimensional convex function is minimised by ternary search
/// over the hard-row interval, to width `tol`.
QpSolution solve_oracle(const SlackQp& qp, double tol);

/// Lateral single-row optimum: -c * grad * gamma(phi) / (1 + c * grad^2).
double lateral_closed_form(const PhiEval& phi, double c, const GammaSpec& gamma);

struct KktResiduals {
  double stationarity = 0.0;     // |2(u - u_ref) + sum(lambda_k a_k)|
  double primal = 0.0;           // max_k g_k (should be <= 0)
  double dual = 0.0;             // min_k lambda_k (should be >= 0)
  double complementarity = 0.0;  // max_k |lambda_k g_k|
  double slack_relation = 0.0;   // max over slacked rows |delta_k - lambda_k / 2c|
};

KktResiduals kkt_residuals(const SlackQp& qp, const QpSolution& sol);

/// KKT certificate at the tolerances the test suite uses.
bool kkt_certified(const SlackQp& qp, const QpSolution& sol);

}  // namespace c2te
