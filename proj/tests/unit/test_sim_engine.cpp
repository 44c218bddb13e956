#include <doctest.h>

#include <cmath>
#include <sstream>

#include <c2te/errors.hpp>
#include <c2te/metrics.hpp>
#include <c2te/sim_engine.hpp>
#include <c2te/trajectory.hpp>

#include "support.hpp"

using namespace c2te;
using doctest::Approx;

TEST_SUITE("sim-engine") {

TEST_CASE("step count") {
  CHECK(step_count(20.0, 0.01) == 2000);
  CHECK(step_count(0.0, 0.01) == 0);
  CHECK(step_count(0.105, 0.01) == 11);
  CHECK(step_count(0.1, 0.03) == 4);
  CHECK_THROWS_AS(step_count(1.0, 0.0), Error);
}

TEST_CASE("event queue fires in time order") {
  Event a;
  a.time = 2.0;
  a.id = 1;
  Event b;
  b.time = 1.0;
  b.id = 2;
  Event c;
  c.time = 1.0;
  c.id = 3;
  EventQueue q({a, b, c});
  CHECK(q.pop_due(0.5).empty());
  const auto due = q.pop_due(1.0 - 1e-12);
  REQUIRE(due.size() == 2);
  CHECK(due[0].id == 2);
  CHECK(due[1].id == 3);
  CHECK(q.pop_due(5.0).size() == 1);
  CHECK(q.empty());
}

TEST_CASE("apply events examples") {
  Scenario sc = test::small_scenario({test::spec(1, 0, 0), test::spec(2, 5, 3.5), test::spec(3, 10, 7)});
  World world = initial_world(sc);
  world.vehicles[2].state.v = 20.0;

  Event breakdown;
  breakdown.time = 2.5;
  breakdown.kind = Event::Kind::Breakdown;
  breakdown.id = 3;
  apply_events(world, {breakdown}, sc);
  CHECK(world.at(3).state.behavior == Behavior::Broken);
  CHECK(world.at(3).state.v == 0.0);

  std::vector<Event> appear;
  for (int id : {4, 5, 6}) {
    Event e;
    e.time = 4.6;
    e.kind = Event::Kind::Appear;
    e.vehicle = test::spec(id, 40.0 + 10.0 * id, 0.0);
    appear.push_back(e);
  }
  apply_events(world, appear, sc);
  CHECK(world.vehicles.size() == 6);
  CHECK(world.at(5).state.stage == Stage::PreMerge);

  const World before = world;
  CHECK(apply_events(world, {}, sc).empty());
  CHECK(world.vehicles.size() == before.vehicles.size());

  Event bad;
  bad.kind = Event::Kind::Appear;
  bad.vehicle = test::spec(9, 10.0, 3.5);  // overlaps vehicle 3 across lanes
  CHECK_THROWS_AS(apply_event(world, bad, sc), AssumptionViolation);
}

TEST_CASE("single vehicle at the target advances by v_d dt") {
  Scenario sc = test::small_scenario({test::spec(1, 30.0, 7.0)});
  const World w = initial_world(sc);
  const StepOutcome out = step(w, sc.controller, sc.dt);
  CHECK(out.next.vehicles[0].state.x == Approx(30.0 + 20.0 * 0.01).epsilon(1e-14));
  CHECK(out.next.vehicles[0].state.y == 7.0);
  CHECK(out.next.target.x == Approx(30.2));
  CHECK(out.record.t == 0.0);
  CHECK(out.record.vehicles[0].state.stage == Stage::Merge);
}

TEST_CASE("broken vehicle holds its pose") {
  Scenario sc = test::small_scenario({test::spec(1, 40.0, 7.0), test::spec(2, 20.0, 3.5)});
  sc.vehicles[1].state.behavior = Behavior::Broken;
  World w = initial_world(sc);
  for (int k = 0; k < 50; ++k) w = step(w, sc.controller, sc.dt).next;
  CHECK(w.at(2).state.x == 20.0);
  CHECK(w.at(2).state.y == 3.5);
  CHECK(w.at(2).state.theta == 0.0);
}

TEST_CASE("same-lane pair at r does not close in one step") {
  Scenario sc = test::small_scenario({test::spec(1, 0.0, 0.0), test::spec(2, 3.0, 0.0)});
  const World w = initial_world(sc);
  const World next = step(w, sc.controller, sc.dt).next;
  CHECK(next.at(2).state.x - next.at(1).state.x >= 3.0);
}

TEST_CASE("zero horizon gives one record") {
  Scenario sc = test::small_scenario({test::spec(1, 0.0, 0.0)}, 0.0);
  const TrajectoryLog log = run(sc);
  REQUIRE(log.records.size() == 1);
  CHECK(log.records[0].t == 0.0);
  CHECK_FALSE(log.abort);
}

TEST_CASE("headline scenario passes and replays identically") {
  const Scenario sc = load_scenario(test::scenarios_dir() / "sim8.json");
  const TrajectoryLog a = run(sc);
  const TrajectoryLog b = run(sc);
  CHECK_FALSE(a.abort);
  CHECK(test::to_jsonl(a) == test::to_jsonl(b));
  CHECK(check_platoon_objectives(a, sc.controller).all_pass());
  CHECK(check_premerge_objectives(a, sc.controller).all_pass());
}

TEST_CASE("property: timestamps sit on the grid") {
  test::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    Scenario sc = test::small_scenario({test::spec(1, 0.0, 0.0), test::spec(2, 5.0, 7.0)});
    sc.dt = rng.uniform(0.005, 0.05);
    sc.t_end = rng.uniform(0.0, 1.0);
    const TrajectoryLog log = run(sc);
    REQUIRE_FALSE(log.abort);
    const long steps = static_cast<long>(std::ceil(sc.t_end / sc.dt - 1e-9));
    CHECK(static_cast<long>(log.records.size()) == steps + 1);
    for (std::size_t k = 0; k < log.records.size(); ++k) {
      CHECK(log.records[k].k == static_cast<long>(k));
      CHECK(log.records[k].t == static_cast<double>(k) * sc.dt);
    }
  }
}

TEST_CASE("property: events after the horizon change nothing") {
  test::Rng rng(62);
  Scenario sc = load_scenario(test::scenarios_dir() / "sim8.json");
  sc.t_end = 2.0;
  const std::string plain = test::to_jsonl(run(sc));
  for (int trial = 0; trial < 5; ++trial) {
    Scenario late = sc;
    Event e;
    e.time = sc.t_end + rng.uniform(0.01, 10.0);
    e.kind = Event::Kind::Breakdown;
    e.id = rng.integer(1, 8);
    late.events.push_back(e);
    validate_scenario(late);
    CHECK(test::to_jsonl(run(late)) == plain);
  }
}

TEST_CASE("property: translation equivariance") {
  test::Rng rng(63);
  Scenario sc = load_scenario(test::scenarios_dir() / "sim8.json");
  sc.t_end = 5.0;
  const TrajectoryLog base = run(sc);
  for (int trial = 0; trial < 4; ++trial) {
    const double shift = rng.uniform(-500.0, 500.0);
    Scenario moved = sc;
    for (VehicleSpec& v : moved.vehicles) v.state.x += shift;
    moved.target0.x += shift;
    const TrajectoryLog log = run(moved);
    REQUIRE(log.records.size() == base.records.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < log.records.size(); ++k) {
      for (std::size_t i = 0; i < log.records[k].vehicles.size(); ++i) {
        const auto& a = base.records[k].vehicles[i].state;
        const auto& b = log.records[k].vehicles[i].state;
        worst = std::max(worst, std::abs(b.x - a.x - shift));
        worst = std::max(worst, std::abs(b.y - a.y));
      }
    }
    CAPTURE(shift);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("collision aborts with an abort record") {
  // coarse step: the merging vehicle jumps from outside R to inside r of a
  // stopped vehicle
  Scenario sc = test::small_scenario({test::spec(1, 0.0, 0.0), test::spec(2, 20.0, 7.0)}, 5.0);
  sc.vehicles[1].state.behavior = Behavior::Broken;
  sc.target0 = {60.0, 7.0, 20.0};
  sc.dt = 0.1;
  const TrajectoryLog log = run(sc);
  REQUIRE(log.abort);
  CHECK(log.abort->kind == "unsafe");
  CHECK(log.abort->ids == std::vector<int>{1, 2});
  CHECK(log.abort->t == log.records.back().t);
  CHECK(log.records.back().notes.back() == "abort unsafe");
  CHECK(log.records.back().vehicles[0].command.ux == 0.0);
  CHECK(log.records.size() < 51);
}

TEST_CASE("jsonl and csv round trip") {
  Scenario sc = load_scenario(test::scenarios_dir() / "breakdown.json");
  sc.t_end = 3.0;
  const TrajectoryLog log = run(sc);
  const std::string text = test::to_jsonl(log);
  std::istringstream in(text);
  const TrajectoryLog back = read_jsonl(in);
  CHECK(test::to_jsonl(back) == text);
  CHECK(back.records.size() == log.records.size());

  bool noted = false;
  for (const StepRecord& r : back.records) {
    for (const std::string& n : r.notes) noted |= n.rfind("breakdown", 0) == 0;
  }
  CHECK(noted);

  std::ostringstream csv;
  write_csv(csv, log);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == kCsvHeader);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == log.records.size() * 8);

  std::istringstream broken("{\"type\":\"header\"");
  CHECK_THROWS_AS(read_jsonl(broken), Error);
}

}  // TEST_SUITE
