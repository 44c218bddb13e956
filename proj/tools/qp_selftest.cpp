#include "qp_selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

namespace c2te::tools {

SlackQp random_qp(std::mt19937_64& rng, int max_rows) {
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::uniform_int_distribution<int> rows(0, max_rows);
  std::uniform_int_distribution<int> weight(0, 2);
  std::bernoulli_distribution hard(1.0 / 3.0);
  std::bernoulli_distribution zero_grad(0.05);
  // hard rows with |a| << 1 put the root far out, where no double meets the
  // absolute complementarity bound
  std::uniform_real_distribution<double> magnitude(0.5, 10.0);
  std::bernoulli_distribution negative(0.5);
  auto hard_grad = [&](std::mt19937_64& g) {
    const double m = magnitude(g);
    return negative(g) ? -m : m;
  };

  static constexpr double kWeights[] = {1.0, 10.0, 100.0};
  SlackQp qp;
  qp.u_ref = coef(rng);
  qp.c = kWeights[weight(rng)];
  const int n = rows(rng);
  for (int k = 0; k < n; ++k) {
    ConstraintRow row;
    row.slacked = !hard(rng);
    row.a = row.slacked ? coef(rng) : hard_grad(rng);
    row.b = coef(rng);
    row.w = coef(rng);
    if (zero_grad(rng)) row.a = 0.0;
    qp.rows.push_back(row);
  }
  return qp;
}

bool SelftestResult::pass() const {
  return status_mismatches == 0 && kkt_failures == 0 &&
         max_u_deviation <= kSelftestUTolerance &&
         max_objective_deviation <= kSelftestObjectiveTolerance;
}

std::string SelftestResult::to_json(std::uint64_t seed) const {
  nlohmann::json doc = {{"instances", instances},
                        {"seed", seed},
                        {"infeasible", infeasible},
                        {"status_mismatches", status_mismatches},
                        {"kkt_failures", kkt_failures},
                        {"max_u_deviation", max_u_deviation},
                        {"max_objective_deviation", max_objective_deviation},
                        {"u_tolerance", kSelftestUTolerance},
                        {"objective_tolerance", kSelftestObjectiveTolerance},
                        {"pass", pass()}};
  return doc.dump(2);
}

SelftestResult run_qp_selftest(long n, std::uint64_t seed, const QpSolver& solver) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  SelftestResult res;
  for (long i = 0; i < n; ++i) {
    const SlackQp qp = random_qp(rng);
    const QpSolution got = solver(qp);
    const QpSolution want = solve_oracle(qp, kOracleTolerance);
    ++res.instances;
    if (got.status != want.status) {
      ++res.status_mismatches;
      continue;
    }
    if (want.status == QpStatus::InfeasibleHard) {
      ++res.infeasible;
      continue;
    }
    const double du = std::abs(got.u - want.u);
    const double f_got = reduced_objective(qp, got.u);
    const double f_want = reduced_objective(qp, want.u);
    const double df = std::abs(f_got - f_want) / std::max(1.0, std::abs(f_want));
    // NaN must count as a failure
    res.max_u_deviation = std::isnan(du) ? INFINITY : std::max(res.max_u_deviation, du);
    res.max_objective_deviation =
        std::isnan(df) ? INFINITY : std::max(res.max_objective_deviation, df);
    if (!kkt_certified(qp, got)) ++res.kkt_failures;
  }
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace c2te::tools
