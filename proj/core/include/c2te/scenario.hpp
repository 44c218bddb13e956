#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "c2te/controller.hpp"
#include "c2te/vehicle_model.hpp"

namespace c2te {

struct VehicleSpec {
  VehicleState state;
  VehicleParams params;
};

struct Event {
  enum class Kind { Breakdown, Appear, SetBehavior };

  double time = 0.0;
  Kind kind = Kind::Breakdown;
  int id = 0;                            // Breakdown / SetBehavior
  Behavior behavior = Behavior::Normal;  // SetBehavior
  VehicleSpec vehicle;                   // Appear
};

const char* to_string(Event::Kind kind);

struct Scenario {
  std::string name;
  std::vector<double> lanes;  // lateral lane positions [m]
  double desired_lane_y = 0.0;
  std::vector<VehicleSpec> vehicles;
  ControllerParams controller;
  VirtualTarget target0;
  double dt = 0.01;
  double t_end = 20.0;
  std::vector<Event> events;
  std::uint64_t seed = 0;  // reserved; runs are deterministic
};

/// Index of the lane at lateral position y, or -1.
int lane_index(const std::vector<double>& lanes, double y);

/// Parses and validates. Throws Error(Parse) or AssumptionViolation.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

std::string scenario_to_json(const Scenario& scenario);

/// Checks every structural and initial-configuration rule:
///   radius-ordering      0 < B_i < r < rho < R
///   desired-lane         desired lane is one of the lanes, target on it
///   lane-membership      every vehicle starts on a lane
///   initial-heading      theta = psi = 0 at start
///   cross-lane-overlap   vehicles on different lanes never share x
///   same-lane-spacing    same-lane gaps >= r
///   unique-ids
/// plus numeric sanity of dt, t_end, c, gamma and the events.
void validate_scenario(const Scenario& scenario);

/// Checks a vehicle entering a world that already holds `present` against the
/// same initial-configuration rules.
void validate_entry(const VehicleSpec& entering, const std::vector<VehicleState>& present,
                    const Scenario& scenario);

}  // namespace c2te
