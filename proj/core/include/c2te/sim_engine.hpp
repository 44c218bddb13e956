#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "c2te/controller.hpp"
#include "c2te/neighbor_graph.hpp"
#include "c2te/scenario.hpp"
#include "c2te/trajectory.hpp"
#include "c2te/vehicle_model.hpp"

namespace c2te {

/// Events within this distance after a step start still fire before that step.
inline constexpr double kEventTimeSlack = 1e-9;

struct SimVehicle {
  VehicleState state;
  VehicleParams params;
};

struct World {
  long k = 0;
  double time = 0.0;
  std::vector<SimVehicle> vehicles;
  VirtualTarget target;

  WorldSnapshot snapshot() const;
  const SimVehicle& at(int id) const;
};

World initial_world(const Scenario& scenario);

/// Number of integration steps covering [0, t_end]: round(t_end/dt) when that
/// ratio is an integer up to rounding, ceil otherwise.
long step_count(double t_end, double dt);

/// Pending events, fired in time order (stable for equal times).
class EventQueue {
 public:
  explicit EventQueue(std::vector<Event> events);

  /// Removes and returns every event with time <= t + kEventTimeSlack.
  std::vector<Event> pop_due(double t);
  bool empty() const { return next_ == events_.size(); }

 private:
  std::vector<Event> events_;
  std::size_t next_ = 0;
};

/// Applies one event in place and returns a human-readable note.
/// Appear entries are validated against the current world.
std::string apply_event(World& world, const Event& event, const Scenario& scenario);

/// Applies `events` in order; returns the notes.
std::vector<std::string> apply_events(World& world, const std::vector<Event>& events,
                                      const Scenario& scenario);

/// Controls for every vehicle from one frozen snapshot, in vehicle order.
std::vector<ControlDecision> compute_controls(const World& world,
                                              const ControllerParams& params);

struct StepOutcome {
  StepRecord record;  // world at the start of the step with its controls
  World next;
};

/// One synchronous step: snapshot, controls, actuation, integration.
StepOutcome step(const World& world, const ControllerParams& params, double dt);

/// Runs the scenario to t_end. Aborts (collision, non-finite state, invalid
/// appearance) end the log early and are recorded in TrajectoryLog::abort.
TrajectoryLog run(const Scenario& scenario);

/// Log record of `world` with the given controls.
StepRecord make_record(const World& world, const std::vector<ControlDecision>& decisions);

}  // namespace c2te
