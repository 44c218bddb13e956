#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <c2te/slack_qp.hpp>

namespace c2te::tools {

using QpSolver = std::function<QpSolution(const SlackQp&)>;

/// Random instance: up to `max_rows` rows, coefficients in [-10, 10],
/// c drawn from {1, 10, 100}, roughly a third of the rows hard. Hard-row
/// gradients have magnitude in [0.5, 10] unless zero.
SlackQp random_qp(std::mt19937_64& rng, int max_rows = 6);

struct SelftestResult {
  long instances = 0;
  long infeasible = 0;
  long status_mismatches = 0;
  long kkt_failures = 0;
  double max_u_deviation = 0.0;
  double max_objective_deviation = 0.0;  // relative, floored at 1
  double wall_time_s = 0.0;  // not serialized; output stays reproducible

  bool pass() const;
  std::string to_json(std::uint64_t seed) const;
};

inline constexpr double kSelftestUTolerance = 1e-6;
inline constexpr double kSelftestObjectiveTolerance = 1e-8;
inline constexpr double kOracleTolerance = 1e-10;

/// Compares `solver` against solve_oracle on n random instances.
SelftestResult run_qp_selftest(long n, std::uint64_t seed, const QpSolver& solver);

}  // namespace c2te::tools
