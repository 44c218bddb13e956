#include "c2te/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "c2te/errors.hpp"
#include "c2te/neighbor_graph.hpp"

namespace c2te {

using nlohmann::json;

const char* to_string(Event::Kind kind) {
  switch (kind) {
    case Event::Kind::Breakdown: return "breakdown";
    case Event::Kind::Appear: return "appear";
    case Event::Kind::SetBehavior: return "set_behavior";
  }
  return "breakdown";
}

int lane_index(const std::vector<double>& lanes, double y) {
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    if (std::abs(lanes[k] - y) <= kLaneTolerance) return static_cast<int>(k);
  }
  return -1;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorKind::Parse, "scenario parse error: " + what);
}

double number_at(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(std::string("missing field '") + key + "'");
  if (!it->is_number()) parse_fail(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) parse_fail(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

Behavior parse_behavior(const std::string& text) {
  if (text == "normal") return Behavior::Normal;
  if (text == "broken") return Behavior::Broken;
  if (text == "non_merging") return Behavior::NonMerging;
  parse_fail("unknown behavior '" + text + "'");
}

GammaSpec parse_gamma(const json& node) {
  if (node.is_string()) {
    if (node.get<std::string>() == "identity") return GammaSpec::identity();
    parse_fail("unknown gamma '" + node.get<std::string>() + "'");
  }
  if (!node.is_object()) parse_fail("gamma must be a string or an object");
  const std::string kind = node.value("kind", "identity");
  if (kind == "identity") return GammaSpec::identity();
  if (kind == "power") return GammaSpec::power_law(number_at(node, "gain"), number_at(node, "exponent"));
  parse_fail("unknown gamma kind '" + kind + "'");
}

json gamma_to_json(const GammaSpec& gamma) {
  if (gamma.kind == GammaSpec::Kind::Identity) return "identity";
  return {{"kind", "power"}, {"gain", gamma.gain}, {"exponent", gamma.exponent}};
}

VehicleSpec parse_vehicle(const json& node, const VehicleParams& defaults) {
  if (!node.is_object()) parse_fail("vehicle entries must be objects");
  VehicleSpec spec;
  if (!node.contains("id") || !node["id"].is_number_integer()) parse_fail("vehicle needs an integer 'id'");
  spec.state.id = node["id"].get<int>();
  spec.state.x = number_at(node, "x_m");
  spec.state.y = number_at(node, "y_m");
  spec.state.theta = number_or(node, "theta_rad", 0.0);
  spec.state.psi = number_or(node, "psi_rad", 0.0);
  spec.state.v = number_or(node, "v_mps", 0.0);
  spec.state.behavior = parse_behavior(node.value("behavior", "normal"));
  if (node.contains("cruise_mps")) spec.state.cruise_speed = number_at(node, "cruise_mps");

  spec.params = defaults;
  if (node.contains("base_length_m")) {
    spec.params.base_length = number_at(node, "base_length_m");
    if (!node.contains("virtual_offset_m")) {
      spec.params.virtual_offset = 0.1 * spec.params.base_length;
    }
  }
  if (node.contains("virtual_offset_m")) spec.params.virtual_offset = number_at(node, "virtual_offset_m");
  if (node.contains("steer_limit_rad")) spec.params.steer_limit = number_at(node, "steer_limit_rad");
  return spec;
}

json vehicle_to_json(const VehicleSpec& spec) {
  json out = {{"id", spec.state.id},
              {"x_m", spec.state.x},
              {"y_m", spec.state.y},
              {"theta_rad", spec.state.theta},
              {"psi_rad", spec.state.psi},
              {"v_mps", spec.state.v},
              {"behavior", to_string(spec.state.behavior)},
              {"base_length_m", spec.params.base_length},
              {"virtual_offset_m", spec.params.virtual_offset}};
  if (spec.state.cruise_speed) out["cruise_mps"] = *spec.state.cruise_speed;
  if (spec.params.steer_limit) out["steer_limit_rad"] = *spec.params.steer_limit;
  return out;
}

Event parse_event(const json& node, const VehicleParams& defaults) {
  if (!node.is_object()) parse_fail("event entries must be objects");
  Event ev;
  ev.time = number_at(node, "time_s");
  const std::string kind = node.value("kind", "");
  if (kind == "breakdown") {
    ev.kind = Event::Kind::Breakdown;
    ev.id = static_cast<int>(number_at(node, "id"));
  } else if (kind == "appear") {
    ev.kind = Event::Kind::Appear;
    if (!node.contains("vehicle")) parse_fail("appear event needs 'vehicle'");
    ev.vehicle = parse_vehicle(node["vehicle"], defaults);
  } else if (kind == "set_behavior") {
    ev.kind = Event::Kind::SetBehavior;
    ev.id = static_cast<int>(number_at(node, "id"));
    ev.behavior = parse_behavior(node.value("behavior", ""));
  } else {
    parse_fail("unknown event kind '" + kind + "'");
  }
  return ev;
}

json event_to_json(const Event& ev) {
  json out = {{"time_s", ev.time}, {"kind", to_string(ev.kind)}};
  switch (ev.kind) {
    case Event::Kind::Breakdown: out["id"] = ev.id; break;
    case Event::Kind::Appear: out["vehicle"] = vehicle_to_json(ev.vehicle); break;
    case Event::Kind::SetBehavior:
      out["id"] = ev.id;
      out["behavior"] = to_string(ev.behavior);
      break;
  }
  return out;
}

void require(bool ok, const std::string& rule, std::vector<int> ids, const std::string& detail) {
  if (!ok) throw AssumptionViolation(rule, std::move(ids), detail);
}

std::string fmt_pair(double a, double b) {
  std::ostringstream out;
  out << a << " vs " << b;
  return out.str();
}

}  // namespace

Scenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    parse_fail(e.what());
  }
  if (!doc.is_object()) parse_fail("document must be an object");

  Scenario sc;
  try {
    sc.name = doc.value("name", "");
    if (!doc.contains("lanes_y_m") || !doc["lanes_y_m"].is_array()) parse_fail("missing 'lanes_y_m' array");
    for (const json& y : doc["lanes_y_m"]) {
      if (!y.is_number()) parse_fail("'lanes_y_m' entries must be numbers");
      sc.lanes.push_back(y.get<double>());
    }
    sc.desired_lane_y = number_at(doc, "desired_lane_y_m");
    sc.dt = number_or(doc, "dt_s", 0.01);
    sc.t_end = number_at(doc, "t_end_s");
    sc.seed = doc.value("seed", std::uint64_t{0});

    if (!doc.contains("controller") || !doc["controller"].is_object()) parse_fail("missing 'controller' object");
    const json& ctl = doc["controller"];
    const double R = number_at(ctl, "sensing_radius_m");
    const double r = number_at(ctl, "safe_radius_m");
    sc.controller.sensing = SensingParams::with_default_switch(R, r);
    sc.controller.sensing.switch_radius = number_or(ctl, "switch_radius_m", sc.controller.sensing.switch_radius);
    sc.controller.slack_weight = number_or(ctl, "slack_weight", 100.0);
    sc.controller.desired_speed = number_at(ctl, "desired_speed_mps");
    if (ctl.contains("gamma")) sc.controller.gamma = parse_gamma(ctl["gamma"]);

    if (!doc.contains("target") || !doc["target"].is_object()) parse_fail("missing 'target' object");
    const json& tgt = doc["target"];
    sc.target0.x = number_at(tgt, "x_m");
    sc.target0.y = number_or(tgt, "y_m", sc.desired_lane_y);
    sc.target0.v = number_or(tgt, "v_mps", sc.controller.desired_speed);

    VehicleParams defaults = VehicleParams::with_base(2.0);
    if (doc.contains("vehicle_defaults")) {
      const json& def = doc["vehicle_defaults"];
      defaults = VehicleParams::with_base(number_or(def, "base_length_m", 2.0));
      defaults.virtual_offset = number_or(def, "virtual_offset_m", defaults.virtual_offset);
      if (def.contains("steer_limit_rad")) defaults.steer_limit = number_at(def, "steer_limit_rad");
    }

    if (!doc.contains("vehicles") || !doc["vehicles"].is_array()) parse_fail("missing 'vehicles' array");
    for (const json& v : doc["vehicles"]) sc.vehicles.push_back(parse_vehicle(v, defaults));
    if (doc.contains("events")) {
      if (!doc["events"].is_array()) parse_fail("'events' must be an array");
      for (const json& e : doc["events"]) sc.events.push_back(parse_event(e, defaults));
    }
  } catch (const json::exception& e) {
    parse_fail(e.what());
  }

  for (VehicleSpec& v : sc.vehicles) v.state.lane0 = lane_index(sc.lanes, v.state.y);
  for (Event& e : sc.events) {
    if (e.kind == Event::Kind::Appear) e.vehicle.state.lane0 = lane_index(sc.lanes, e.vehicle.state.y);
  }
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot read scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& sc) {
  json doc;
  doc["name"] = sc.name;
  doc["lanes_y_m"] = sc.lanes;
  doc["desired_lane_y_m"] = sc.desired_lane_y;
  doc["dt_s"] = sc.dt;
  doc["t_end_s"] = sc.t_end;
  doc["seed"] = sc.seed;
  doc["controller"] = {{"sensing_radius_m", sc.controller.sensing.sensing_radius},
                       {"safe_radius_m", sc.controller.sensing.safe_radius},
                       {"switch_radius_m", sc.controller.sensing.switch_radius},
                       {"slack_weight", sc.controller.slack_weight},
                       {"desired_speed_mps", sc.controller.desired_speed},
                       {"gamma", gamma_to_json(sc.controller.gamma)}};
  doc["target"] = {{"x_m", sc.target0.x}, {"y_m", sc.target0.y}, {"v_mps", sc.target0.v}};
  doc["vehicles"] = json::array();
  for (const VehicleSpec& v : sc.vehicles) doc["vehicles"].push_back(vehicle_to_json(v));
  doc["events"] = json::array();
  for (const Event& e : sc.events) doc["events"].push_back(event_to_json(e));
  return doc.dump(2);
}

void validate_entry(const VehicleSpec& entering, const std::vector<VehicleState>& present,
                    const Scenario& sc) {
  const VehicleState& s = entering.state;
  const double r = sc.controller.sensing.safe_radius;
  require(entering.params.valid(), "vehicle-geometry", {s.id}, "base length and virtual offset must be positive");
  require(entering.params.base_length < r, "radius-ordering", {s.id},
          "vehicle base must be shorter than the safe radius: " + fmt_pair(entering.params.base_length, r));
  require(std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.v), "vehicle-geometry", {s.id},
          "non-finite initial state");
  require(lane_index(sc.lanes, s.y) >= 0, "lane-membership", {s.id}, "initial y is not on any lane");
  require(s.theta == 0.0 && s.psi == 0.0, "initial-heading", {s.id}, "initial yaw and steering must be zero");
  if (s.cruise_speed) {
    require(std::isfinite(*s.cruise_speed), "vehicle-geometry", {s.id}, "non-finite cruise speed");
  }
  for (const VehicleState& o : present) {
    require(o.id != s.id, "unique-ids", {s.id}, "duplicate vehicle id");
    const bool same_lane = std::abs(o.y - s.y) <= kLaneTolerance;
    const double gap = std::abs(o.x - s.x);
    if (same_lane) {
      require(gap >= r, "same-lane-spacing", {o.id, s.id},
              "same-lane gap below the safe radius: " + fmt_pair(gap, r));
    } else {
      require(gap > 0.0, "cross-lane-overlap", {o.id, s.id},
              "vehicles on different lanes share the same longitudinal position");
    }
  }
}

void validate_scenario(const Scenario& sc) {
  const SensingParams& sp = sc.controller.sensing;
  require(sp.safe_radius > 0.0 && sp.safe_radius < sp.switch_radius && sp.switch_radius < sp.sensing_radius,
          "radius-ordering", {}, "need 0 < r < rho < R");
  require(sc.controller.slack_weight > 0.0 && std::isfinite(sc.controller.slack_weight), "controller-params", {},
          "slack weight must be positive");
  require(sc.controller.gamma.valid(), "controller-params", {}, "power-law gamma needs gain > 0 and exponent in (0,1)");
  require(sc.controller.desired_speed >= 0.0 && std::isfinite(sc.controller.desired_speed), "controller-params", {},
          "desired speed must be non-negative");
  require(sc.dt > 0.0 && std::isfinite(sc.dt), "time-grid", {}, "dt must be positive");
  require(sc.t_end >= 0.0 && std::isfinite(sc.t_end), "time-grid", {}, "t_end must be non-negative");
  require(!sc.lanes.empty(), "desired-lane", {}, "at least one lane is required");
  require(lane_index(sc.lanes, sc.desired_lane_y) >= 0, "desired-lane", {}, "desired lane is not one of the lanes");
  require(std::abs(sc.target0.y - sc.desired_lane_y) <= kLaneTolerance, "desired-lane", {},
          "target must start on the desired lane");
  require(sc.target0.v >= 0.0, "desired-lane", {}, "target speed must be non-negative");

  std::vector<VehicleState> present;
  for (const VehicleSpec& v : sc.vehicles) {
    validate_entry(v, present, sc);
    present.push_back(v.state);
  }

  std::set<int> known;
  for (const VehicleSpec& v : sc.vehicles) known.insert(v.state.id);
  for (const Event& e : sc.events) {
    require(e.time >= 0.0 && std::isfinite(e.time), "event-time", {}, "event times must be >= 0");
    if (e.kind == Event::Kind::Appear) {
      require(!known.count(e.vehicle.state.id), "unique-ids", {e.vehicle.state.id}, "appearing vehicle reuses an id");
      known.insert(e.vehicle.state.id);
    } else {
      require(known.count(e.id) > 0, "event-target", {e.id}, "event refers to an unknown vehicle");
    }
  }
}

}  // namespace c2te
