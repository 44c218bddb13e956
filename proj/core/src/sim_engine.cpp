#include "c2te/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "c2te/errors.hpp"

namespace c2te {

WorldSnapshot World::snapshot() const {
  WorldSnapshot snap;
  snap.time = time;
  snap.target = target;
  snap.vehicles.reserve(vehicles.size());
  for (const SimVehicle& v : vehicles) snap.vehicles.push_back(v.state);
  return snap;
}

const SimVehicle& World::at(int id) const {
  for (const SimVehicle& v : vehicles) {
    if (v.state.id == id) return v;
  }
  throw Error(ErrorKind::UnknownId, "unknown vehicle id " + std::to_string(id));
}

World initial_world(const Scenario& scenario) {
  World world;
  world.target = scenario.target0;
  for (const VehicleSpec& spec : scenario.vehicles) {
    SimVehicle v{spec.state, spec.params};
    v.state.lane0 = lane_index(scenario.lanes, v.state.y);
    v.state.stage = Stage::PreMerge;
    if (v.state.behavior == Behavior::Broken) v.state.v = 0.0;
    world.vehicles.push_back(v);
  }
  return world;
}

long step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need dt > 0 and t_end >= 0");
  }
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

EventQueue::EventQueue(std::vector<Event> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
}

std::vector<Event> EventQueue::pop_due(double t) {
  std::vector<Event> due;
  while (next_ < events_.size() && events_[next_].time <= t + kEventTimeSlack) {
    due.push_back(events_[next_++]);
  }
  return due;
}

std::string apply_event(World& world, const Event& event, const Scenario& scenario) {
  std::ostringstream note;
  note << to_string(event.kind) << " t=" << world.time;
  auto find = [&](int id) -> SimVehicle& {
    for (SimVehicle& v : world.vehicles) {
      if (v.state.id == id) return v;
    }
    throw Error(ErrorKind::UnknownId, "event refers to unknown vehicle " + std::to_string(id));
  };
  switch (event.kind) {
    case Event::Kind::Breakdown: {
      SimVehicle& v = find(event.id);
      v.state.behavior = Behavior::Broken;
      v.state.v = 0.0;
      note << " id=" << event.id;
      break;
    }
    case Event::Kind::SetBehavior: {
      SimVehicle& v = find(event.id);
      v.state.behavior = event.behavior;
      if (event.behavior == Behavior::Broken) v.state.v = 0.0;
      note << " id=" << event.id << " behavior=" << to_string(event.behavior);
      break;
    }
    case Event::Kind::Appear: {
      std::vector<VehicleState> present;
      present.reserve(world.vehicles.size());
      for (const SimVehicle& v : world.vehicles) present.push_back(v.state);
      validate_entry(event.vehicle, present, scenario);
      SimVehicle v{event.vehicle.state, event.vehicle.params};
      v.state.lane0 = lane_index(scenario.lanes, v.state.y);
      v.state.stage = Stage::PreMerge;
      if (v.state.behavior == Behavior::Broken) v.state.v = 0.0;
      world.vehicles.push_back(v);
      note << " id=" << v.state.id;
      break;
    }
  }
  return note.str();
}

std::vector<std::string> apply_events(World& world, const std::vector<Event>& events,
                                      const Scenario& scenario) {
  std::vector<std::string> notes;
  notes.reserve(events.size());
  for (const Event& e : events) notes.push_back(apply_event(world, e, scenario));
  return notes;
}

std::vector<ControlDecision> compute_controls(const World& world,
                                              const ControllerParams& params) {
  const WorldSnapshot snap = world.snapshot();
  std::vector<ControlDecision> out;
  out.reserve(snap.vehicles.size());
  for (const VehicleState& v : snap.vehicles) out.push_back(compute_control(v.id, snap, params));
  return out;
}

StepRecord make_record(const World& world, const std::vector<ControlDecision>& decisions) {
  StepRecord rec;
  rec.k = world.k;
  rec.t = world.time;
  rec.target = world.target;
  rec.vehicles.reserve(world.vehicles.size());
  for (std::size_t n = 0; n < world.vehicles.size(); ++n) {
    VehicleRecord v;
    v.state = world.vehicles[n].state;
    if (n < decisions.size()) {
      v.state.stage = decisions[n].stage;
      v.command = decisions[n].desired;
      v.fallback = decisions[n].fallback;
    }
    rec.vehicles.push_back(v);
  }
  return rec;
}

namespace {

World advance(const World& world, const std::vector<ControlDecision>& decisions, double dt) {
  World next = world;
  for (std::size_t n = 0; n < world.vehicles.size(); ++n) {
    const SimVehicle& cur = world.vehicles[n];
    SimVehicle& out = next.vehicles[n];
    const ControlDecision& d = decisions[n];
    VehicleState state = cur.state;
    state.stage = d.stage;
    double v = 0.0;
    double psi = state.psi;
    if (auto act = desired_to_actuation(d.desired, state.theta, cur.params)) {
      v = act->v;
      psi = act->psi;
    }
    out.state = integrate_vehicle(state, v, psi, dt, cur.params);
  }
  next.target = integrate_target(world.target, dt);
  next.k = world.k + 1;
  return next;
}

}  // namespace

StepOutcome step(const World& world, const ControllerParams& params, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  const std::vector<ControlDecision> decisions = compute_controls(world, params);
  StepOutcome out{make_record(world, decisions), advance(world, decisions, dt)};
  out.next.time = world.time + dt;
  for (std::size_t n = 0; n < decisions.size(); ++n) {
    if (decisions[n].fallback) {
      out.record.notes.push_back("fallback id=" + std::to_string(world.vehicles[n].state.id));
    }
  }
  return out;
}

TrajectoryLog run(const Scenario& scenario) {
  TrajectoryLog log;
  log.scenario = scenario.name;
  log.dt = scenario.dt;
  const long steps = step_count(scenario.t_end, scenario.dt);
  log.records.reserve(static_cast<std::size_t>(steps) + 1);

  World world = initial_world(scenario);
  EventQueue queue(scenario.events);
  for (long k = 0; k <= steps; ++k) {
    // exact grid times instead of an accumulated sum
    world.k = k;
    world.time = static_cast<double>(k) * scenario.dt;
    std::vector<std::string> notes;
    try {
      notes = apply_events(world, queue.pop_due(world.time), scenario);
      if (k == steps) {
        StepRecord rec = make_record(world, compute_controls(world, scenario.controller));
        rec.notes = std::move(notes);
        log.records.push_back(std::move(rec));
        break;
      }
      StepOutcome out = step(world, scenario.controller, scenario.dt);
      out.record.notes.insert(out.record.notes.begin(), notes.begin(), notes.end());
      log.records.push_back(std::move(out.record));
      world = std::move(out.next);
    } catch (const Error& e) {
      AbortInfo info;
      info.t = world.time;
      info.message = e.what();
      switch (e.kind()) {
        case ErrorKind::Unsafe: {
          info.kind = "unsafe";
          if (const auto* u = dynamic_cast<const UnsafeError*>(&e)) info.ids = {u->first(), u->second()};
          break;
        }
        case ErrorKind::AssumptionViolation:
          info.kind = "assumption";
          if (const auto* a = dynamic_cast<const AssumptionViolation*>(&e)) info.ids = a->ids();
          break;
        case ErrorKind::NonFinite: info.kind = "non_finite"; break;
        case ErrorKind::EnumerationLimit: info.kind = "enumeration_limit"; break;
        default: info.kind = "error"; break;
      }
      // state at the abort instant, without commands
      StepRecord rec = make_record(world, {});
      rec.notes = std::move(notes);
      rec.notes.push_back("abort " + info.kind);
      log.records.push_back(std::move(rec));
      log.abort = std::move(info);
      break;
    }
  }
  return log;
}

}  // namespace c2te
