#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <c2te/errors.hpp>
#include <c2te/metrics.hpp>
#include <c2te/scenario.hpp>

#include "qp_selftest.hpp"

namespace c2te::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,         // parse error, assumption violation, bad arguments
  kExitSafety = 3,        // collision abort
  kExitNumeric = 4,       // non-finite state, enumeration limit
  kExitVerification = 5,  // an objective or self-test failed
};

int exit_code_for(const Error& error);
int exit_code_for_abort(const std::string& abort_kind);

/// Numeric parameters that may be changed from the command line.
struct Overrides {
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> rho;
  std::optional<double> c;
  std::optional<std::string> gamma;  // "identity" or "power:c0,eta"
  std::optional<std::uint64_t> seed;
};

/// Throws Error(InvalidArgument) on malformed text.
GammaSpec parse_gamma_flag(const std::string& text);

/// Applies the overrides and re-validates the scenario.
void apply_overrides(Scenario& scenario, const Overrides& overrides);

/// Loads a scenario and applies overrides.
Scenario load_with_overrides(const std::filesystem::path& path, const Overrides& overrides);

/// Writes trajectory.jsonl, trajectory.csv and run-manifest.json to out_dir.
int cmd_run(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
            const Overrides& overrides);

/// Writes report.json to out_dir. 0 iff every objective passes.
int cmd_verify(const std::filesystem::path& log_path, const std::filesystem::path& scenario_path,
               const std::filesystem::path& out_dir, const Overrides& overrides,
               const PlatoonTolerances& tolerances);

/// Writes qp-selftest.json to out_dir. 0 iff the solver matches the oracle.
int cmd_selftest_qp(long n, std::uint64_t seed, const std::filesystem::path& out_dir,
                    const QpSolver& solver);

/// Runs and verifies each scenario into out_dir/<stem>/ and writes
/// batch-summary.json. Returns the worst exit code.
int cmd_batch(const std::vector<std::filesystem::path>& scenarios,
              const std::filesystem::path& out_dir, const Overrides& overrides,
              const PlatoonTolerances& tolerances);

/// Sets the log level from C2TE_LOG (debug|info|warn|error).
void configure_logging();

}  // namespace c2te::tools
