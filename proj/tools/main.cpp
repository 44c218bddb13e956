#include <CLI11.hpp>

#include <c2te/slack_qp.hpp>
#include <c2te/version.hpp>

#include "commands.hpp"

namespace {

void add_overrides(CLI::App* cmd, c2te::tools::Overrides& o) {
  cmd->add_option("--dt", o.dt, "Integration step [s]")->check(CLI::PositiveNumber);
  cmd->add_option("--t-end", o.t_end, "Simulated horizon [s]")->check(CLI::NonNegativeNumber);
  cmd->add_option("--rho", o.rho, "Stage-switch radius [m]");
  cmd->add_option("--c", o.c, "Slack weight")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", o.gamma, "identity | power:c0,eta");
  cmd->add_option("--seed", o.seed, "Recorded in the manifest; runs are deterministic");
}

void add_tolerances(CLI::App* cmd, c2te::PlatoonTolerances& t) {
  cmd->add_option("--settle", t.settle_fraction, "Trailing fraction of the run checked")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--tol-y", t.lateral, "Lateral tolerance [m]");
  cmd->add_option("--tol-v", t.velocity, "Velocity tolerance [m/s]");
  cmd->add_option("--gap-margin", t.gap_margin, "Margin inside (r, rho) [m]");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace c2te::tools;
  configure_logging();

  CLI::App app{"Two-stage constraint-based platoon merging simulator"};
  app.set_version_flag("--version", c2te::kVersion);
  app.require_subcommand(1);

  std::string scenario;
  std::string log_path;
  std::string out_dir = ".";
  Overrides overrides;
  c2te::PlatoonTolerances tolerances;
  long n = 10000;
  std::uint64_t seed = 42;
  std::vector<std::string> batch_files;

  auto* run = app.add_subcommand("run", "Simulate a scenario");
  run->add_option("scenario", scenario, "Scenario JSON")->required();
  run->add_option("-o,--out", out_dir, "Output directory");
  add_overrides(run, overrides);

  auto* verify = app.add_subcommand("verify", "Check a trajectory log against every objective");
  verify->add_option("log", log_path, "trajectory.jsonl")->required();
  verify->add_option("scenario", scenario, "Scenario JSON the log came from")->required();
  verify->add_option("-o,--out", out_dir, "Output directory");
  add_overrides(verify, overrides);
  add_tolerances(verify, tolerances);

  auto* selftest = app.add_subcommand("selftest-qp", "Randomized active-set vs oracle check");
  selftest->add_option("--n", n, "Instances");
  selftest->add_option("--seed", seed, "RNG seed");
  selftest->add_option("-o,--out", out_dir, "Output directory");

  auto* batch = app.add_subcommand("batch", "Run and verify several scenarios");
  batch->add_option("scenarios", batch_files, "Scenario JSON files")->required();
  batch->add_option("-o,--out", out_dir, "Output directory");
  add_overrides(batch, overrides);
  add_tolerances(batch, tolerances);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*run) return cmd_run(scenario, out_dir, overrides);
  if (*verify) return cmd_verify(log_path, scenario, out_dir, overrides, tolerances);
  if (*selftest) return cmd_selftest_qp(n, seed, out_dir, c2te::solve_active_set);
  std::vector<std::filesystem::path> paths(batch_files.begin(), batch_files.end());
  return cmd_batch(paths, out_dir, overrides, tolerances);
}
