#include "c2te/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "c2te/errors.hpp"

namespace c2te {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_non_merging(const VehicleRecord& v) { return v.state.behavior == Behavior::NonMerging; }
bool is_normal(const VehicleRecord& v) { return v.state.behavior == Behavior::Normal; }

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(12);
  out << value;
  return out.str();
}

json number_or_null(double value) {
  return std::isfinite(value) ? json(value) : json(nullptr);
}

json objective_to_json(const ObjectiveResult& r) {
  json out = {{"name", r.name},
              {"pass", r.pass},
              {"measured", number_or_null(r.measured)},
              {"tolerance", r.tolerance},
              {"detail", r.detail}};
  out["time"] = r.time ? json(*r.time) : json(nullptr);
  return out;
}

json report_to_json(const ObjectiveReport& report) {
  json objectives = json::array();
  for (const ObjectiveResult& r : report.objectives) objectives.push_back(objective_to_json(r));
  return {{"group", report.group}, {"pass", report.all_pass()}, {"objectives", objectives}};
}

}  // namespace

bool ObjectiveReport::all_pass() const {
  return std::all_of(objectives.begin(), objectives.end(),
                     [](const ObjectiveResult& r) { return r.pass; });
}

const ObjectiveResult& ObjectiveReport::get(const std::string& name) const {
  for (const ObjectiveResult& r : objectives) {
    if (r.name == name) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "no objective named '" + name + "'");
}

std::vector<int> extract_ordering(const StepRecord& record) {
  std::vector<const VehicleRecord*> normal;
  for (const VehicleRecord& v : record.vehicles) {
    if (is_normal(v)) normal.push_back(&v);
  }
  if (normal.empty()) {
    throw Error(ErrorKind::EmptyFleet, "no Normal vehicle at t=" + fmt(record.t));
  }
  std::sort(normal.begin(), normal.end(), [](const VehicleRecord* a, const VehicleRecord* b) {
    if (a->state.x != b->state.x) return a->state.x > b->state.x;
    return a->state.id < b->state.id;
  });
  std::vector<int> ids;
  ids.reserve(normal.size());
  for (const VehicleRecord* v : normal) ids.push_back(v->state.id);
  return ids;
}

ObjectiveReport check_premerge_objectives(const TrajectoryLog& log,
                                          const ControllerParams& params) {
  const double r = params.sensing.safe_radius;
  const double rho = params.sensing.switch_radius;
  ObjectiveReport report;
  report.group = "premerge";

  // spacing: first record per vehicle with every other vehicle >= rho away
  std::map<int, double> first_clear;
  std::set<int> needs_clear;
  std::optional<double> all_clear;
  // lane keeping
  std::map<int, double> y_first;
  double max_drift = 0.0;
  int drift_id = -1;
  // same-lane spacing
  double min_same_lane = kInf;
  std::optional<double> same_lane_time;

  for (const StepRecord& rec : log.records) {
    const auto& vs = rec.vehicles;
    bool every_pair_clear = true;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const VehicleRecord& a = vs[i];
      y_first.try_emplace(a.state.id, a.state.y);
      if (is_normal(a)) needs_clear.insert(a.state.id);

      double nearest = kInf;
      for (std::size_t j = 0; j < vs.size(); ++j) {
        if (j == i) continue;
        const double gap = std::abs(a.state.x - vs[j].state.x);
        nearest = std::min(nearest, gap);
        if (j > i && is_normal(a) && is_normal(vs[j]) && gap < rho) every_pair_clear = false;
        if (j > i && !is_non_merging(a) && !is_non_merging(vs[j]) &&
            a.state.lane0 == vs[j].state.lane0 && a.state.stage == Stage::PreMerge &&
            vs[j].state.stage == Stage::PreMerge && gap < min_same_lane) {
          min_same_lane = gap;
          same_lane_time = rec.t;
        }
      }
      if (is_normal(a) && nearest >= rho) first_clear.try_emplace(a.state.id, rec.t);

      if (a.state.stage == Stage::PreMerge) {
        const double drift = std::abs(a.state.y - y_first[a.state.id]);
        if (drift > max_drift) {
          max_drift = drift;
          drift_id = a.state.id;
        }
      }
    }
    if (every_pair_clear && !all_clear) all_clear = rec.t;
  }

  // vehicles that stopped being Normal before clearing are not survivors
  std::set<int> final_normal;
  if (!log.records.empty()) {
    for (const VehicleRecord& v : log.records.back().vehicles) {
      if (is_normal(v)) final_normal.insert(v.state.id);
    }
  }
  ObjectiveResult spacing;
  spacing.name = "spacing";
  spacing.tolerance = rho;
  spacing.pass = !log.records.empty();
  double t1 = 0.0;
  std::vector<int> missing;
  for (int id : needs_clear) {
    auto it = first_clear.find(id);
    if (it != first_clear.end()) {
      t1 = std::max(t1, it->second);
    } else if (final_normal.count(id)) {
      missing.push_back(id);
      spacing.pass = false;
    }
  }
  spacing.measured = t1;
  if (spacing.pass) spacing.time = t1;
  std::ostringstream detail;
  if (!missing.empty()) {
    detail << "never separated by rho:";
    for (int id : missing) detail << ' ' << id;
    detail << "; ";
  }
  detail << "all pairs simultaneously >= rho: "
         << (all_clear ? "t=" + fmt(*all_clear) : std::string("never"));
  spacing.detail = detail.str();
  report.objectives.push_back(spacing);

  ObjectiveResult lane;
  lane.name = "lane-keeping";
  lane.tolerance = kLaneKeepTolerance;
  lane.measured = max_drift;
  lane.pass = max_drift <= kLaneKeepTolerance;
  lane.detail = drift_id >= 0 ? "largest drift by vehicle " + std::to_string(drift_id) : "";
  report.objectives.push_back(lane);

  ObjectiveResult same;
  same.name = "same-lane";
  same.tolerance = r - kSafetySlack;
  same.measured = min_same_lane;
  same.time = same_lane_time;
  same.pass = min_same_lane >= r - kSafetySlack;
  same.detail = std::isfinite(min_same_lane) ? "" : "no same-lane pre-merge pairs";
  report.objectives.push_back(same);
  return report;
}

ObjectiveReport check_platoon_objectives(const TrajectoryLog& log,
                                         const ControllerParams& params,
                                         const PlatoonTolerances& tols) {
  const double r = params.sensing.safe_radius;
  const double rho = params.sensing.switch_radius;
  ObjectiveReport report;
  report.group = "platoon";

  ObjectiveResult lateral{"lateral", false, kInf, tols.lateral, {}, ""};
  ObjectiveResult platoon{"platoon", false, -kInf, tols.gap_margin, {}, ""};
  ObjectiveResult cruising{"cruising", false, kInf, tols.velocity, {}, ""};
  ObjectiveResult collision{"collision", false, kInf, r - kSafetySlack, {}, ""};

  // whole-log collision check on both-Merge pairs
  double min_merge_gap = kInf;
  for (const StepRecord& rec : log.records) {
    const auto& vs = rec.vehicles;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].state.stage != Stage::Merge || is_non_merging(vs[i])) continue;
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (vs[j].state.stage != Stage::Merge || is_non_merging(vs[j])) continue;
        const double gap = std::abs(vs[i].state.x - vs[j].state.x);
        if (gap < min_merge_gap) {
          min_merge_gap = gap;
          collision.time = rec.t;
        }
      }
    }
  }
  collision.measured = min_merge_gap;
  collision.pass = min_merge_gap >= r - kSafetySlack && !abort_involves_merging_pair(log);
  if (log.abort) collision.detail = "run aborted: " + log.abort->message;

  if (log.records.empty()) {
    lateral.detail = platoon.detail = cruising.detail = "empty log";
    report.objectives = {lateral, platoon, cruising, collision};
    return report;
  }

  const double t0 = log.records.front().t;
  const double t_last = log.records.back().t;
  const double t_window = t_last - tols.settle_fraction * (t_last - t0);
  std::size_t first = 0;
  while (first < log.records.size() && log.records[first].t < t_window - 1e-12) ++first;

  std::set<int> members;
  for (const VehicleRecord& v : log.records.back().vehicles) {
    if (is_normal(v)) members.insert(v.state.id);
  }

  double max_lateral = 0.0;
  double min_gap = kInf;
  double max_gap = -kInf;
  bool ordering_constant = true;
  std::vector<int> reference;
  for (std::size_t n = first; n < log.records.size(); ++n) {
    const StepRecord& rec = log.records[n];
    for (const VehicleRecord& v : rec.vehicles) {
      if (members.count(v.state.id)) {
        max_lateral = std::max(max_lateral, std::abs(v.state.y - rec.target.y));
      }
    }
    std::vector<int> order;
    try {
      order = extract_ordering(rec);
    } catch (const Error&) {
      ordering_constant = false;
      continue;
    }
    if (n == first) reference = order;
    if (order != reference) ordering_constant = false;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      const double gap = rec.find(order[k])->state.x - rec.find(order[k + 1])->state.x;
      min_gap = std::min(min_gap, gap);
      max_gap = std::max(max_gap, gap);
    }
  }

  lateral.measured = max_lateral;
  lateral.pass = !members.empty() && max_lateral <= tols.lateral;
  lateral.time = t_window;
  if (members.empty()) lateral.detail = "no Normal vehicle in the final record";

  platoon.time = t_window;
  if (reference.size() < 2) {
    platoon.measured = kInf;
    platoon.pass = ordering_constant && !reference.empty();
    platoon.detail = "fewer than two platoon members";
  } else {
    platoon.measured = std::min(min_gap - r, rho - max_gap);
    platoon.pass = ordering_constant && platoon.measured > tols.gap_margin;
    std::ostringstream detail;
    detail << "adjacent gaps in [" << fmt(min_gap) << ", " << fmt(max_gap) << "]"
           << (ordering_constant ? "" : "; ordering changed within the window");
    platoon.detail = detail.str();
  }

  double max_speed_error = 0.0;
  std::size_t samples = 0;
  for (std::size_t n = std::max<std::size_t>(first, 1); n + 1 < log.records.size(); ++n) {
    const StepRecord& prev = log.records[n - 1];
    const StepRecord& next = log.records[n + 1];
    const double span = next.t - prev.t;
    for (int id : members) {
      const VehicleRecord* a = prev.find(id);
      const VehicleRecord* b = next.find(id);
      if (!a || !b) continue;
      const double speed = (b->state.x - a->state.x) / span;
      max_speed_error = std::max(max_speed_error, std::abs(speed - log.records[n].target.v));
      ++samples;
    }
  }
  cruising.time = t_window;
  if (samples == 0) {
    cruising.measured = kInf;
    cruising.detail = "settle window holds no interior record";
  } else {
    cruising.measured = max_speed_error;
    cruising.pass = max_speed_error <= tols.velocity;
  }

  report.objectives = {lateral, platoon, cruising, collision};
  return report;
}

std::vector<std::pair<double, double>> min_gap_timeseries(const TrajectoryLog& log) {
  std::vector<std::pair<double, double>> series;
  series.reserve(log.records.size());
  for (const StepRecord& rec : log.records) {
    double best = kInf;
    const auto& vs = rec.vehicles;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (!is_normal(vs[i])) continue;
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (!is_normal(vs[j])) continue;
        best = std::min(best, std::abs(vs[i].state.x - vs[j].state.x));
      }
    }
    series.emplace_back(rec.t, best);
  }
  return series;
}

double non_merging_min_gap(const TrajectoryLog& log) {
  double best = kInf;
  for (const StepRecord& rec : log.records) {
    const auto& vs = rec.vehicles;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (!is_non_merging(vs[i]) && !is_non_merging(vs[j])) continue;
        best = std::min(best, std::abs(vs[i].state.x - vs[j].state.x));
      }
    }
  }
  return best;
}

bool abort_involves_merging_pair(const TrajectoryLog& log) {
  if (!log.abort || log.abort->kind != "unsafe" || log.records.empty()) return false;
  const StepRecord& last = log.records.back();
  for (int id : log.abort->ids) {
    const VehicleRecord* v = last.find(id);
    if (v && is_non_merging(*v)) return false;
  }
  return true;
}

std::string report_json(const TrajectoryLog& log, const ObjectiveReport& premerge,
                        const ObjectiveReport& platoon) {
  json doc;
  doc["scenario"] = log.scenario;
  doc["premerge"] = report_to_json(premerge);
  doc["platoon"] = report_to_json(platoon);
  doc["final_ordering"] = json::array();
  if (!log.records.empty()) {
    try {
      doc["final_ordering"] = extract_ordering(log.records.back());
    } catch (const Error&) {
    }
  }
  doc["non_merging_min_gap"] = number_or_null(non_merging_min_gap(log));
  json series = json::array();
  for (const auto& [t, gap] : min_gap_timeseries(log)) series.push_back({t, number_or_null(gap)});
  doc["min_gap_series"] = std::move(series);
  if (log.abort) {
    doc["abort"] = {{"kind", log.abort->kind},
                    {"message", log.abort->message},
                    {"t", log.abort->t},
                    {"ids", log.abort->ids}};
  } else {
    doc["abort"] = nullptr;
  }
  doc["pass"] = premerge.all_pass() && platoon.all_pass() && !log.abort;
  return doc.dump(2);
}

}  // namespace c2te
