#include "c2te/slack_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "c2te/errors.hpp"

namespace c2te {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Acceptance tolerance for a candidate active set, scaled by the magnitude of
// the terms that make up a row residual.
double row_tolerance(const ConstraintRow& row, double u) {
  return 1e-9 * (1.0 + std::abs(row.b) + std::abs(row.a) * (std::abs(u) + std::abs(row.w)));
}

struct Candidate {
  double u = 0.0;
  std::vector<double> multipliers;
  double violation = kInf;  // 0 when every KKT sign condition holds
  const ConstraintRow* hard = nullptr;  // active hard row, if any
};

// u = w - b/a leaves a rounding-level residual on the hard row, which a large
// multiplier would amplify. Walk the neighbouring doubles for one where the
// row evaluates to exactly zero; otherwise keep the smallest |residual|.
double snap_to_row(const ConstraintRow& row, double u) {
  double best = u;
  double best_abs = std::abs(row.residual(u));
  for (double dir : {kInf, -kInf}) {
    double probe = u;
    for (int step = 0; step < 64 && best_abs > 0.0; ++step) {
      probe = std::nextafter(probe, dir);
      const double g = std::abs(row.residual(probe));
      if (g < best_abs) {
        best = probe;
        best_abs = g;
      }
    }
  }
  return best;
}

// Solves the KKT system for one active set. Hard rows in the set must have
// a != 0 and there is at most one of them (see solve_active_set).
Candidate solve_candidate(const SlackQp& qp, const std::vector<std::size_t>& active) {
  const std::size_t n = qp.rows.size();
  Candidate cand;
  cand.multipliers.assign(n, 0.0);

  const ConstraintRow* hard = nullptr;
  std::size_t hard_index = 0;
  for (std::size_t k : active) {
    if (!qp.rows[k].slacked) {
      hard = &qp.rows[k];
      hard_index = k;
    }
  }

  if (hard) {
    cand.u = hard->w - hard->b / hard->a;
  } else {
    // 2(u - u_ref) + sum 2c a_k (a_k (u - w_k) + b_k) = 0
    double num = qp.u_ref;
    double den = 1.0;
    for (std::size_t k : active) {
      const ConstraintRow& row = qp.rows[k];
      num += qp.c * row.a * (row.a * row.w - row.b);
      den += qp.c * row.a * row.a;
    }
    cand.u = num / den;
  }

  double stationarity = 2.0 * (cand.u - qp.u_ref);
  for (std::size_t k : active) {
    const ConstraintRow& row = qp.rows[k];
    if (!row.slacked) continue;
    cand.multipliers[k] = 2.0 * qp.c * row.residual(cand.u);
    stationarity += cand.multipliers[k] * row.a;
  }
  if (hard) {
    cand.multipliers[hard_index] = -stationarity / hard->a;
    cand.hard = hard;
  }

  double violation = 0.0;
  std::vector<bool> is_active(n, false);
  for (std::size_t k : active) is_active[k] = true;
  for (std::size_t k = 0; k < n; ++k) {
    const ConstraintRow& row = qp.rows[k];
    const double tol = row_tolerance(row, cand.u);
    if (is_active[k]) {
      const double lambda_tol = 2.0 * qp.c * tol + 1e-12;
      violation = std::max(violation, std::max(0.0, -cand.multipliers[k] - lambda_tol));
    } else {
      violation = std::max(violation, std::max(0.0, row.residual(cand.u) - tol));
    }
  }
  cand.violation = violation;
  return cand;
}

// Advances `idx` to the next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

QpSolution finalize(const SlackQp& qp, double u, std::vector<double> multipliers,
                    const HardInterval& hard) {
  QpSolution sol;
  sol.status = QpStatus::Optimal;
  sol.u = u;
  sol.hard = hard;
  sol.multipliers = std::move(multipliers);
  sol.deltas.assign(qp.rows.size(), 0.0);
  for (std::size_t k = 0; k < qp.rows.size(); ++k) {
    double& lambda = sol.multipliers[k];
    if (lambda < 0.0) lambda = 0.0;
    if (qp.rows[k].slacked) {
      // delta taken from the residual itself so active rows hold with g = 0 exactly
      sol.deltas[k] = lambda > 0.0 ? std::max(0.0, qp.rows[k].residual(u)) : 0.0;
      lambda = 2.0 * qp.c * sol.deltas[k];
    }
    if (lambda > 0.0) sol.active_set.push_back(k);
  }
  sol.objective = (u - qp.u_ref) * (u - qp.u_ref);
  for (double d : sol.deltas) sol.objective += qp.c * d * d;
  return sol;
}

QpSolution infeasible(const SlackQp& qp, const HardInterval& hard) {
  QpSolution sol;
  sol.status = QpStatus::InfeasibleHard;
  sol.u = std::numeric_limits<double>::quiet_NaN();
  sol.hard = hard;
  sol.deltas.assign(qp.rows.size(), 0.0);
  sol.multipliers.assign(qp.rows.size(), 0.0);
  sol.objective = kInf;
  return sol;
}

}  // namespace

const char* to_string(QpStatus status) {
  return status == QpStatus::Optimal ? "optimal" : "infeasible_hard";
}

HardInterval hard_interval(const SlackQp& qp) {
  HardInterval out{-kInf, kInf, false};
  for (const ConstraintRow& row : qp.rows) {
    if (row.slacked) continue;
    if (row.a == 0.0) {
      if (row.b > 0.0) out.degenerate_conflict = true;
      continue;
    }
    const double bound = row.w - row.b / row.a;
    if (row.a > 0.0) {
      out.upper = std::min(out.upper, bound);
    } else {
      out.lower = std::max(out.lower, bound);
    }
  }
  return out;
}

double reduced_objective(const SlackQp& qp, double u) {
  double f = (u - qp.u_ref) * (u - qp.u_ref);
  for (const ConstraintRow& row : qp.rows) {
    if (!row.slacked) continue;
    const double d = std::max(0.0, row.residual(u));
    f += qp.c * d * d;
  }
  return f;
}

QpSolution solve_active_set(const SlackQp& qp) {
  const std::size_t n = qp.rows.size();
  if (n > kMaxEnumerationRows) {
    throw Error(ErrorKind::EnumerationLimit,
                "active-set enumeration supports at most " +
                    std::to_string(kMaxEnumerationRows) + " rows, got " + std::to_string(n));
  }
  if (!(qp.c > 0.0)) throw Error(ErrorKind::InvalidArgument, "slack weight must be > 0");

  const HardInterval hard = hard_interval(qp);
  if (hard.empty()) return infeasible(qp, hard);
  if (n == 0) return finalize(qp, qp.u_ref, {}, hard);

  // A hard row with a = 0 never needs a multiplier, and an optimum with at
  // most one active hard row always exists, so such sets are skipped.
  auto admissible = [&](const std::vector<std::size_t>& set) {
    int hard_count = 0;
    for (std::size_t k : set) {
      if (qp.rows[k].slacked) continue;
      if (qp.rows[k].a == 0.0) return false;
      if (++hard_count > 1) return false;
    }
    return true;
  };

  Candidate best;
  for (std::size_t size = 0; size <= n; ++size) {
    std::vector<std::size_t> set(size);
    std::iota(set.begin(), set.end(), std::size_t{0});
    do {
      if (!admissible(set)) continue;
      Candidate cand = solve_candidate(qp, set);
      if (cand.violation == 0.0) {
        const double u = cand.hard ? snap_to_row(*cand.hard, cand.u) : cand.u;
        return finalize(qp, u, std::move(cand.multipliers), hard);
      }
      if (cand.violation < best.violation) best = std::move(cand);
    } while (size > 0 && next_combination(set, n));
  }
  // Only reachable through rounding at the acceptance tolerances: return the
  // least-violating candidate.
  return finalize(qp, best.u, std::move(best.multipliers), hard);
}

QpSolution solve_oracle(const SlackQp& qp, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "oracle tolerance must be > 0");
  if (!(qp.c > 0.0)) throw Error(ErrorKind::InvalidArgument, "slack weight must be > 0");
  const HardInterval hard = hard_interval(qp);
  if (hard.empty()) return infeasible(qp, hard);

  // The minimiser satisfies (u - u_ref)^2 <= f(u*) <= f(u0) for any feasible u0.
  const double u0 = std::clamp(qp.u_ref, hard.lower, hard.upper);
  const double radius = std::sqrt(reduced_objective(qp, u0)) + 1.0;
  double lo = std::max(hard.lower, qp.u_ref - radius);
  double hi = std::min(hard.upper, qp.u_ref + radius);

  // f(m2) - f(m1), arranged so that cancellation does not swamp the sign.
  auto increment = [&](double m1, double m2) {
    double diff = (m2 - m1) * (m1 + m2 - 2.0 * qp.u_ref);
    for (const ConstraintRow& row : qp.rows) {
      if (!row.slacked) continue;
      const double r1 = row.residual(m1);
      const double r2 = row.residual(m2);
      const double h1 = std::max(0.0, r1);
      const double h2 = std::max(0.0, r2);
      const double dh = (r1 > 0.0 && r2 > 0.0) ? row.a * (m2 - m1) : h2 - h1;
      diff += qp.c * dh * (h1 + h2);
    }
    return diff;
  };

  while (hi - lo > tol) {
    const double third = (hi - lo) / 3.0;
    const double m1 = lo + third;
    const double m2 = hi - third;
    if (!(m1 > lo && m2 < hi)) break;  // interval below floating-point resolution
    if (increment(m1, m2) > 0.0) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double u = 0.5 * (lo + hi);

  std::vector<double> multipliers(qp.rows.size(), 0.0);
  for (std::size_t k = 0; k < qp.rows.size(); ++k) {
    const ConstraintRow& row = qp.rows[k];
    if (row.slacked) multipliers[k] = 2.0 * qp.c * std::max(0.0, row.residual(u));
  }
  // Hard-row multipliers are not recovered by the oracle.
  QpSolution sol = finalize(qp, u, std::move(multipliers), hard);
  sol.objective = reduced_objective(qp, u);
  return sol;
}

double lateral_closed_form(const PhiEval& phi, double c, const GammaSpec& gamma) {
  return -c * phi.grad * gamma_eval(gamma, phi.value) / (1.0 + c * phi.grad * phi.grad);
}

KktResiduals kkt_residuals(const SlackQp& qp, const QpSolution& sol) {
  KktResiduals res;
  double stationarity = 2.0 * (sol.u - qp.u_ref);
  res.primal = -kInf;
  res.dual = kInf;
  for (std::size_t k = 0; k < qp.rows.size(); ++k) {
    const ConstraintRow& row = qp.rows[k];
    const double lambda = sol.multipliers[k];
    const double delta = row.slacked ? sol.deltas[k] : 0.0;
    const double g = row.residual(sol.u) - delta;
    stationarity += lambda * row.a;
    res.primal = std::max(res.primal, g);
    res.dual = std::min(res.dual, lambda);
    res.complementarity = std::max(res.complementarity, std::abs(lambda * g));
    if (row.slacked) {
      res.slack_relation =
          std::max(res.slack_relation, std::abs(delta - lambda / (2.0 * qp.c)));
    }
  }
  if (qp.rows.empty()) {
    res.primal = 0.0;
    res.dual = 0.0;
  }
  res.stationarity = std::abs(stationarity);
  return res;
}

bool kkt_certified(const SlackQp& qp, const QpSolution& sol) {
  if (sol.status != QpStatus::Optimal) return false;
  const KktResiduals res = kkt_residuals(qp, sol);
  double scale = 1.0 + std::abs(sol.u) + std::abs(qp.u_ref);
  for (std::size_t k = 0; k < qp.rows.size(); ++k) {
    scale += std::abs(sol.multipliers[k] * qp.rows[k].a);
  }
  return res.stationarity <= 1e-9 * scale && res.primal <= 1e-9 && res.dual >= -1e-12 &&
         res.complementarity <= 1e-9 && res.slack_relation <= 1e-12 * (1.0 + scale);
}

}  // namespace c2te
