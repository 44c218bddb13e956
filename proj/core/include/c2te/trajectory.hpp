#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "c2te/vehicle_model.hpp"

namespace c2te {

/// State of one vehicle at a log instant plus the command computed from it.
struct VehicleRecord {
  VehicleState state;
  DesiredVelocity command;
  bool fallback = false;
};

struct StepRecord {
  long k = 0;
  double t = 0.0;
  VirtualTarget target;
  std::vector<VehicleRecord> vehicles;
  std::vector<std::string> notes;  // events applied before this record, fallbacks

  const VehicleRecord* find(int id) const;
};

struct AbortInfo {
  std::string kind;  // "unsafe", "non_finite", ...
  std::string message;
  double t = 0.0;
  std::vector<int> ids;
};

struct TrajectoryLog {
  std::string scenario;
  double dt = 0.0;
  std::vector<StepRecord> records;
  std::optional<AbortInfo> abort;
};

/// JSON Lines: a header line, one line per record, then an abort line if any.
void write_jsonl(std::ostream& out, const TrajectoryLog& log);
void write_jsonl(const std::filesystem::path& path, const TrajectoryLog& log);

/// Throws Error(Parse) on malformed input.
TrajectoryLog read_jsonl(std::istream& in);
TrajectoryLog read_jsonl(const std::filesystem::path& path);

/// Long-format CSV, one row per vehicle per record.
void write_csv(std::ostream& out, const TrajectoryLog& log);
void write_csv(const std::filesystem::path& path, const TrajectoryLog& log);

inline constexpr const char* kCsvHeader = "t,id,x,y,theta,v,psi,stage,behavior,ux,uy,fallback";

}  // namespace c2te
