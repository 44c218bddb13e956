#include <doctest.h>

#include <algorithm>
#include <optional>

#include <c2te/errors.hpp>
#include <c2te/neighbor_graph.hpp>

#include "support.hpp"

using namespace c2te;
using test::vehicle;

namespace {

const SensingParams kSense{5.0, 3.0, 4.0};

// Brute-force scans used as oracles.
std::optional<int> scan_pre(int id, const WorldSnapshot& snap, double R) {
  const VehicleState& me = snap.at(id);
  std::optional<int> best;
  double best_gap = 0.0;
  for (const VehicleState& v : snap.vehicles) {
    if (v.id == id) continue;
    const double gap = v.x - me.x;
    if (gap <= 0.0 || gap > R) continue;
    if (!best || gap < best_gap || (gap == best_gap && v.id < *best)) {
      best = v.id;
      best_gap = gap;
    }
  }
  return best;
}

std::vector<int> scan_sensing(int id, const WorldSnapshot& snap, double R) {
  const VehicleState& me = snap.at(id);
  std::vector<int> out;
  for (const VehicleState& v : snap.vehicles) {
    if (v.id == id || std::abs(v.x - me.x) > R) continue;
    if (me.stage == Stage::Merge && v.behavior == Behavior::NonMerging) continue;
    out.push_back(v.id);
  }
  return out;
}

std::vector<int> sorted(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

WorldSnapshot random_world(test::Rng& rng, int n) {
  std::vector<VehicleState> vs;
  for (int i = 0; i < n; ++i) {
    const double lane = 3.5 * rng.integer(0, 2);
    // dyadic grid: translated positions and their differences stay exact
    const double x = std::round(rng.uniform(-15.0, 15.0) * 1024.0) / 1024.0;
    vs.push_back(vehicle(i + 1, x, lane,
                         rng.coin() ? Stage::Merge : Stage::PreMerge));
  }
  return test::snapshot(vs);
}

}  // namespace

TEST_SUITE("neighbor-graph") {

TEST_CASE("pre-sensing neighbor examples") {
  const auto snap = test::snapshot({vehicle(1, 0), vehicle(2, 3), vehicle(3, 10)});
  CHECK(pre_sensing_neighbor(1, snap, kSense) == 2);
  CHECK_FALSE(pre_sensing_neighbor(3, snap, kSense));

  const auto tie = test::snapshot({vehicle(1, 0), vehicle(3, 3), vehicle(2, 3)});
  CHECK(pre_sensing_neighbor(1, tie, kSense) == 2);
}

TEST_CASE("same-lane neighbor examples") {
  CHECK(same_lane_neighbors(1, test::snapshot({vehicle(1, 0, 2), vehicle(2, 4, 2)}), kSense) ==
        std::vector<int>{2});
  CHECK(same_lane_neighbors(1, test::snapshot({vehicle(1, 0, 0), vehicle(2, 1, 3.5)}), kSense)
            .empty());
  CHECK(same_lane_neighbors(
            1, test::snapshot({vehicle(1, 0), vehicle(2, 4), vehicle(3, 20)}), kSense) ==
        std::vector<int>{2});
}

TEST_CASE("sensing neighbor examples") {
  CHECK(sensing_neighbors(
            1, test::snapshot({vehicle(1, 0), vehicle(2, 4.9, 3.5), vehicle(3, 5.1, 7)}),
            kSense) == std::vector<int>{2});
  CHECK(sensing_neighbors(1, test::snapshot({vehicle(1, 0)}), kSense).empty());
  const auto snap = test::snapshot(
      {vehicle(1, 0, 0, Stage::Merge), vehicle(2, 3, 3.5, Stage::PreMerge, Behavior::NonMerging)});
  CHECK(sensing_neighbors(1, snap, kSense).empty());
}

TEST_CASE("broken vehicles stay visible") {
  const auto snap = test::snapshot(
      {vehicle(1, 0, 0, Stage::Merge), vehicle(2, 3.5, 0, Stage::Merge, Behavior::Broken)});
  CHECK(sensing_neighbors(1, snap, kSense) == std::vector<int>{2});
  CHECK(same_lane_neighbors(1, snap, kSense) == std::vector<int>{2});
  CHECK(pre_sensing_neighbor(1, snap, kSense) == 2);
}

TEST_CASE("unknown id") {
  const auto snap = test::snapshot({vehicle(1, 0)});
  CHECK_THROWS_AS(pre_sensing_neighbor(9, snap, kSense), Error);
  CHECK_THROWS_AS(same_lane_neighbors(9, snap, kSense), Error);
  CHECK_THROWS_AS(sensing_neighbors(9, snap, kSense), Error);
}

TEST_CASE("property: sets match brute-force scans") {
  test::Rng rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto snap = random_world(rng, rng.integer(1, 9));
    for (const VehicleState& v : snap.vehicles) {
      CHECK(pre_sensing_neighbor(v.id, snap, kSense) == scan_pre(v.id, snap, 5.0));
      CHECK(sorted(sensing_neighbors(v.id, snap, kSense)) == scan_sensing(v.id, snap, 5.0));
      for (int other : same_lane_neighbors(v.id, snap, kSense)) {
        CHECK(std::abs(snap.at(other).y - v.y) <= kLaneTolerance);
        CHECK(std::abs(snap.at(other).x - v.x) <= 5.0);
      }
    }
  }
}

TEST_CASE("property: sensing symmetry among normal vehicles") {
  test::Rng rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto snap = random_world(rng, rng.integer(2, 10));
    for (const VehicleState& a : snap.vehicles) {
      for (int b : sensing_neighbors(a.id, snap, kSense)) {
        const auto back = sensing_neighbors(b, snap, kSense);
        CHECK(std::find(back.begin(), back.end(), a.id) != back.end());
      }
    }
  }
}

TEST_CASE("property: translation invariance") {
  test::Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto snap = random_world(rng, rng.integer(1, 8));
    const double shift = std::ldexp(1.0, rng.integer(-3, 8)) * (rng.coin() ? 1 : -1);
    WorldSnapshot moved = snap;
    for (VehicleState& v : moved.vehicles) v.x += shift;
    for (const VehicleState& v : snap.vehicles) {
      CHECK(pre_sensing_neighbor(v.id, snap, kSense) == pre_sensing_neighbor(v.id, moved, kSense));
      CHECK(sensing_neighbors(v.id, snap, kSense) == sensing_neighbors(v.id, moved, kSense));
      CHECK(same_lane_neighbors(v.id, snap, kSense) == same_lane_neighbors(v.id, moved, kSense));
    }
  }
}

}  // TEST_SUITE
