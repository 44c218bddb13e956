#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <c2te/sim_engine.hpp>
#include <c2te/trajectory.hpp>
#include <c2te/version.hpp>

namespace c2te::tools {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const Error& error) {
  switch (error.kind()) {
    case ErrorKind::Unsafe: return kExitSafety;
    case ErrorKind::NonFinite:
    case ErrorKind::EnumerationLimit: return kExitNumeric;
    case ErrorKind::EmptyFleet: return kExitVerification;
    default: return kExitInput;
  }
}

int exit_code_for_abort(const std::string& abort_kind) {
  if (abort_kind == "unsafe") return kExitSafety;
  if (abort_kind == "assumption") return kExitInput;
  return kExitNumeric;
}

GammaSpec parse_gamma_flag(const std::string& text) {
  if (text == "identity") return GammaSpec::identity();
  const std::string prefix = "power:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string args = text.substr(prefix.size());
    const auto comma = args.find(',');
    if (comma != std::string::npos) {
      try {
        std::size_t used_gain = 0;
        std::size_t used_exp = 0;
        const std::string gain_text = args.substr(0, comma);
        const std::string exp_text = args.substr(comma + 1);
        const double gain = std::stod(gain_text, &used_gain);
        const double exponent = std::stod(exp_text, &used_exp);
        if (used_gain == gain_text.size() && used_exp == exp_text.size()) {
          return GammaSpec::power_law(gain, exponent);
        }
      } catch (const std::exception&) {
      }
    }
  }
  throw Error(ErrorKind::InvalidArgument,
              "--gamma expects 'identity' or 'power:c0,eta', got '" + text + "'");
}

void apply_overrides(Scenario& scenario, const Overrides& o) {
  if (o.dt) scenario.dt = *o.dt;
  if (o.t_end) scenario.t_end = *o.t_end;
  if (o.rho) scenario.controller.sensing.switch_radius = *o.rho;
  if (o.c) scenario.controller.slack_weight = *o.c;
  if (o.gamma) scenario.controller.gamma = parse_gamma_flag(*o.gamma);
  if (o.seed) scenario.seed = *o.seed;
  validate_scenario(scenario);
}

Scenario load_with_overrides(const fs::path& path, const Overrides& overrides) {
  Scenario scenario = load_scenario(path);
  apply_overrides(scenario, overrides);
  return scenario;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << text << '\n';
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::InvalidArgument, "cannot create '" + dir.string() + "'");
}

json overrides_json(const Overrides& o) {
  json out = json::object();
  if (o.dt) out["dt"] = *o.dt;
  if (o.t_end) out["t_end"] = *o.t_end;
  if (o.rho) out["rho"] = *o.rho;
  if (o.c) out["c"] = *o.c;
  if (o.gamma) out["gamma"] = *o.gamma;
  if (o.seed) out["seed"] = *o.seed;
  return out;
}

// Runs the scenario and writes the three run artifacts. Returns the exit code
// and hands the log back for callers that verify it directly.
int run_into(const Scenario& scenario, const fs::path& scenario_path, const fs::path& out_dir,
             const Overrides& overrides, TrajectoryLog* log_out) {
  ensure_dir(out_dir);
  const auto start = std::chrono::steady_clock::now();
  TrajectoryLog log = run(scenario);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_jsonl(out_dir / "trajectory.jsonl", log);
  write_csv(out_dir / "trajectory.csv", log);

  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  manifest["scenario_path"] = scenario_path.generic_string();
  manifest["overrides"] = overrides_json(overrides);
  manifest["scenario"] = json::parse(scenario_to_json(scenario));
  manifest["records"] = log.records.size();
  manifest["abort"] = log.abort ? json{{"kind", log.abort->kind},
                                       {"message", log.abort->message},
                                       {"t", log.abort->t},
                                       {"ids", log.abort->ids}}
                                : json(nullptr);
  manifest["wall_time_s"] = wall;
  write_text(out_dir / "run-manifest.json", manifest.dump(2));

  spdlog::info("{}: {} records in {:.3f} s", scenario.name, log.records.size(), wall);
  int code = kExitOk;
  if (log.abort) {
    spdlog::error("run aborted at t={}: {}", log.abort->t, log.abort->message);
    code = exit_code_for_abort(log.abort->kind);
  }
  if (log_out) *log_out = std::move(log);
  return code;
}

// Mismatch between a log and the scenario it is verified against.
void check_log_matches(const TrajectoryLog& log, const Scenario& scenario) {
  if (log.scenario != scenario.name) {
    throw Error(ErrorKind::InvalidArgument, "log was produced by scenario '" + log.scenario +
                                                "', not '" + scenario.name + "'");
  }
  if (std::abs(log.dt - scenario.dt) > 1e-12 * std::max(1.0, scenario.dt)) {
    throw Error(ErrorKind::InvalidArgument, "log dt differs from the scenario dt");
  }
  if (log.records.empty()) throw Error(ErrorKind::Parse, "log holds no records");
  std::set<int> expected;
  for (const VehicleSpec& v : scenario.vehicles) expected.insert(v.state.id);
  std::set<int> logged;
  for (const VehicleRecord& v : log.records.front().vehicles) logged.insert(v.state.id);
  if (expected != logged) {
    throw Error(ErrorKind::InvalidArgument, "initial vehicles in the log differ from the scenario");
  }
}

int verify_into(const TrajectoryLog& log, const Scenario& scenario, const fs::path& out_dir,
                const PlatoonTolerances& tolerances) {
  ensure_dir(out_dir);
  const ObjectiveReport premerge = check_premerge_objectives(log, scenario.controller);
  const ObjectiveReport platoon = check_platoon_objectives(log, scenario.controller, tolerances);
  write_text(out_dir / "report.json", report_json(log, premerge, platoon));
  bool pass = !log.abort;
  for (const ObjectiveReport* rep : {&premerge, &platoon}) {
    for (const ObjectiveResult& r : rep->objectives) {
      if (!r.pass) {
        spdlog::warn("{} objective '{}' failed (measured {}, tolerance {}) {}", rep->group, r.name,
                     r.measured, r.tolerance, r.detail);
        pass = false;
      }
    }
  }
  return pass ? kExitOk : kExitVerification;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return exit_code_for(e);
  }
}

}  // namespace

int cmd_run(const fs::path& scenario_path, const fs::path& out_dir, const Overrides& overrides) {
  return guarded([&] {
    const Scenario scenario = load_with_overrides(scenario_path, overrides);
    return run_into(scenario, scenario_path, out_dir, overrides, nullptr);
  });
}

int cmd_verify(const fs::path& log_path, const fs::path& scenario_path, const fs::path& out_dir,
               const Overrides& overrides, const PlatoonTolerances& tolerances) {
  return guarded([&] {
    const Scenario scenario = load_with_overrides(scenario_path, overrides);
    const TrajectoryLog log = read_jsonl(log_path);
    check_log_matches(log, scenario);
    return verify_into(log, scenario, out_dir, tolerances);
  });
}

int cmd_selftest_qp(long n, std::uint64_t seed, const fs::path& out_dir, const QpSolver& solver) {
  return guarded([&] {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be >= 1");
    ensure_dir(out_dir);
    const SelftestResult res = run_qp_selftest(n, seed, solver);
    write_text(out_dir / "qp-selftest.json", res.to_json(seed));
    spdlog::info("qp selftest: {} instances, max |du| = {:.3e}, {} KKT failures, {:.3f} s",
                 res.instances, res.max_u_deviation, res.kkt_failures, res.wall_time_s);
    return res.pass() ? kExitOk : kExitVerification;
  });
}

int cmd_batch(const std::vector<fs::path>& scenarios, const fs::path& out_dir,
              const Overrides& overrides, const PlatoonTolerances& tolerances) {
  return guarded([&] {
    ensure_dir(out_dir);
    json entries = json::array();
    int worst = kExitOk;
    long passed = 0;
    for (const fs::path& path : scenarios) {
      const fs::path dir = out_dir / path.stem();
      int code = guarded([&] {
        const Scenario scenario = load_with_overrides(path, overrides);
        TrajectoryLog log;
        const int run_code = run_into(scenario, path, dir, overrides, &log);
        const int verify_code = verify_into(log, scenario, dir, tolerances);
        return run_code != kExitOk ? run_code : verify_code;
      });
      if (code == kExitOk) ++passed;
      worst = std::max(worst, code);
      entries.push_back({{"scenario", path.generic_string()}, {"exit_code", code}, {"pass", code == kExitOk}});
    }
    json summary = {{"total", scenarios.size()},
                    {"passed", passed},
                    {"failed", static_cast<long>(scenarios.size()) - passed},
                    {"runs", entries}};
    write_text(out_dir / "batch-summary.json", summary.dump(2));
    return worst;
  });
}

void configure_logging() {
  if (!spdlog::get("c2te")) spdlog::set_default_logger(spdlog::stderr_color_st("c2te"));
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("C2TE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

}  // namespace c2te::tools
