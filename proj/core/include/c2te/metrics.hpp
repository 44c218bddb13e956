#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "c2te/controller.hpp"
#include "c2te/trajectory.hpp"

namespace c2te {

/// Distance at or above r minus this counts as collision-free.
inline constexpr double kSafetySlack = 1e-9;
/// Allowed drift of y while a vehicle is in the pre-merge stage.
inline constexpr double kLaneKeepTolerance = 1e-9;

struct ObjectiveResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;        // worst value over the checked range
  double tolerance = 0.0;
  std::optional<double> time;   // settlement / witness time when meaningful
  std::string detail;
};

struct ObjectiveReport {
  std::string group;  // "premerge" or "platoon"
  std::vector<ObjectiveResult> objectives;

  bool all_pass() const;
  const ObjectiveResult& get(const std::string& name) const;
};

/// Head-to-tail ids of the Normal vehicles: descending x, ties by id.
/// Throws Error(EmptyFleet) when there is no Normal vehicle.
std::vector<int> extract_ordering(const StepRecord& record);

/// Pre-merge objectives:
///   spacing       every vehicle reaches a record where all others are >= rho
///                 away; T1 is the latest such first time
///   lane-keeping  y stays at its initial value while in the pre-merge stage
///   same-lane     same-initial-lane pairs keep >= r while both pre-merge
/// Pairs involving a NonMerging vehicle are not checked.
ObjectiveReport check_premerge_objectives(const TrajectoryLog& log,
                                          const ControllerParams& params);

struct PlatoonTolerances {
  double settle_fraction = 0.2;  // trailing share of the run checked
  double lateral = 0.05;         // |y - y_d| [m]
  double gap_margin = 0.0;       // gaps must lie in (r + m, rho - m) [m]
  double velocity = 0.2;         // |dx/dt - v_d| [m/s]
};

/// Platoon objectives over the platoon members (Normal vehicles in the final
/// record):
///   lateral      max |y - y_d| over the settle window
///   platoon      constant ordering and adjacent gaps in (r, rho) over the window
///   cruising     central-difference speed within tolerance of v_d
///   collision    both-Merge pairs stay >= r over the whole log
ObjectiveReport check_platoon_objectives(const TrajectoryLog& log,
                                         const ControllerParams& params,
                                         const PlatoonTolerances& tols = {});

/// Per record, the minimum |dx| over unordered Normal pairs; +inf when fewer
/// than two Normal vehicles are present.
std::vector<std::pair<double, double>> min_gap_timeseries(const TrajectoryLog& log);

/// Closest longitudinal approach between a NonMerging vehicle and any other
/// vehicle over the log; +inf when there is none.
double non_merging_min_gap(const TrajectoryLog& log);

/// Whether an abort recorded in the log involves two vehicles that were not
/// NonMerging.
bool abort_involves_merging_pair(const TrajectoryLog& log);

/// Full verification document (both reports, final ordering, min-gap series,
/// abort). `pass` is true iff every objective passes and the run completed.
std::string report_json(const TrajectoryLog& log, const ObjectiveReport& premerge,
                        const ObjectiveReport& platoon);

}  // namespace c2te
