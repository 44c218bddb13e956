#include <doctest.h>

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include <c2te/controller.hpp>
#include <c2te/errors.hpp>

#include "support.hpp"

using namespace c2te;
using doctest::Approx;
using test::vehicle;

TEST_SUITE("c2te-controller") {

TEST_CASE("stage switch examples") {
  const ControllerParams p = test::controller();
  CHECK(update_stage(1, test::snapshot({vehicle(1, 0), vehicle(2, 4.1, 3.5), vehicle(3, -6, 7)}),
                     p) == Stage::Merge);
  CHECK(update_stage(1, test::snapshot({vehicle(1, 0), vehicle(2, 3.9, 3.5), vehicle(3, -6, 7)}),
                     p) == Stage::PreMerge);
  CHECK(update_stage(1,
                     test::snapshot({vehicle(1, 0, 0, Stage::Merge), vehicle(2, 3.2, 3.5)}),
                     p) == Stage::Merge);
  CHECK(update_stage(1, test::snapshot({vehicle(1, 0), vehicle(2, 4.0, 3.5)}), p) == Stage::Merge);
}

TEST_CASE("stage-one examples") {
  const ControllerParams p = test::controller();
  ControlDecision d = stage1_control(1, test::snapshot({vehicle(1, 0)}), p);
  CHECK(d.desired.ux == 20.0);
  CHECK(d.desired.uy == 0.0);
  CHECK(d.stage == Stage::PreMerge);

  d = stage1_control(1, test::snapshot({vehicle(1, 0, 0), vehicle(2, 3, 3.5)}), p);
  CHECK(d.desired.ux - 20.0 == Approx(-100.0 * 16.0 / (1.0 + 100.0 * 16.0)).epsilon(1e-12));
  CHECK(d.desired.ux - 20.0 == Approx(-0.99938).epsilon(1e-5));
  CHECK(d.desired.uy == 0.0);

  d = stage1_control(1, test::snapshot({vehicle(1, 0, 0), vehicle(2, 5, 3.5)}), p);
  CHECK(d.desired.ux == 20.0);
}

TEST_CASE("stage-one hard rows and fallback") {
  const ControllerParams p = test::controller();
  // squeezed between two same-lane vehicles closer than r on both sides
  const auto snap =
      test::snapshot({vehicle(1, 0), vehicle(2, 2.5), vehicle(3, -2.5)});
  const ControlDecision d = stage1_control(1, snap, p);
  CHECK(d.fallback);
  CHECK(std::isfinite(d.desired.ux));

  const auto ok = test::snapshot({vehicle(1, 0), vehicle(2, 3.0)});
  CHECK_FALSE(stage1_control(2, ok, p).fallback);
  CHECK_FALSE(stage1_control(1, ok, p).fallback);
  // rear vehicle may not move toward the one at exactly r
  CHECK(stage1_control(1, ok, p).desired.ux - 20.0 <= 1e-12);
}

TEST_CASE("stage-two examples") {
  const ControllerParams p = test::controller();
  const VirtualTarget target{20, 10, 20};
  ControlDecision d =
      stage2_control(1, test::snapshot({vehicle(1, 20, 10, Stage::Merge)}, target), p);
  CHECK(d.desired.ux == 20.0);
  CHECK(d.desired.uy == 0.0);

  d = stage2_control(1, test::snapshot({vehicle(1, 20, 11, Stage::Merge)}, target), p);
  CHECK(d.desired.uy == Approx(-100.0 / 101.0).epsilon(1e-12));

  d = stage2_control(1, test::snapshot({vehicle(1, 15, 10, Stage::Merge)}, target), p);
  CHECK(d.desired.ux == Approx(20.0 + 500.0 / 101.0).epsilon(1e-12));
  CHECK(d.desired.ux - 20.0 == Approx(4.9505).epsilon(1e-4));
}

TEST_CASE("stage-two collision inside the safe radius") {
  const ControllerParams p = test::controller();
  const auto snap = test::snapshot(
      {vehicle(1, 0, 0, Stage::Merge), vehicle(2, 2.5, 3.5, Stage::Merge)}, {20, 10, 20});
  CHECK_THROWS_AS(stage2_control(1, snap, p), UnsafeError);
}

TEST_CASE("dispatch examples") {
  const ControllerParams p = test::controller();
  const auto broken = test::snapshot({vehicle(1, 0, 0, Stage::Merge, Behavior::Broken)});
  ControlDecision d = compute_control(1, broken, p);
  CHECK(d.desired.ux == 0.0);
  CHECK(d.desired.uy == 0.0);

  VehicleState nm = vehicle(1, 0, 0, Stage::PreMerge, Behavior::NonMerging);
  nm.cruise_speed = 15.0;
  d = compute_control(1, test::snapshot({nm}), p);
  CHECK(d.desired.ux == 15.0);
  CHECK(d.desired.uy == 0.0);

  // alone on the road the switch fires at once and the target sits on the vehicle
  d = compute_control(1, test::snapshot({vehicle(1, 0, 10)}, {0, 10, 20}), p);
  CHECK(d.desired.ux == 20.0);
  CHECK(d.desired.uy == 0.0);

  // with a vehicle inside rho it stays in stage one and cruises
  d = compute_control(1, test::snapshot({vehicle(1, 0, 0), vehicle(2, -3.5, 3.5)}, {50, 10, 20}), p);
  CHECK(d.stage == Stage::PreMerge);
  CHECK(d.desired.ux == 20.0);
}

TEST_CASE("property: stage-one lateral command is zero") {
  test::Rng rng(51);
  const ControllerParams p = test::controller();
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<VehicleState> vs;
    const int n = rng.integer(1, 8);
    for (int i = 0; i < n; ++i) {
      vs.push_back(vehicle(i + 1, rng.uniform(-10, 10), 3.5 * rng.integer(0, 2)));
    }
    const auto snap = test::snapshot(vs, {30, 7, 20});
    for (const VehicleState& v : vs) {
      bool coincident = false;
      for (const VehicleState& o : vs) coincident |= (o.id != v.id && o.x == v.x && o.y == v.y);
      if (coincident) continue;
      CHECK(stage1_control(v.id, snap, p).desired.uy == 0.0);
    }
  }
}

TEST_CASE("property: lateral and longitudinal programs are decoupled") {
  test::Rng rng(52);
  const ControllerParams p = test::controller();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<VehicleState> vs;
    double x = rng.uniform(-10, 10);
    const int n = rng.integer(1, 6);
    for (int i = 0; i < n; ++i) {
      vs.push_back(vehicle(i + 1, x, rng.uniform(-2, 12), Stage::Merge));
      x += rng.uniform(3.05, 6.0);
    }
    const auto snap = test::snapshot(vs, {rng.uniform(-20, 40), 7, 20});
    const int id = rng.integer(1, n);
    const ControlDecision base = stage2_control(id, snap, p);

    WorldSnapshot moved_y = snap;
    moved_y.vehicles[static_cast<std::size_t>(rng.integer(0, n - 1))].y += rng.uniform(-3, 3);
    CHECK(stage2_control(id, moved_y, p).desired.ux == base.desired.ux);

    WorldSnapshot moved_x = snap;
    for (VehicleState& v : moved_x.vehicles) v.x *= 1.5;
    moved_x.target.x += rng.uniform(-5, 5);
    CHECK(stage2_control(id, moved_x, p).desired.uy == base.desired.uy);
  }
}

TEST_CASE("property: balanced pair cruises at the platoon speed") {
  const double r = 3.0;
  const double rho = 4.0;
  // rear vehicle of a pair straddling the target: target pull against repulsion
  auto balance = [&](double g) {
    const double ca = 1.0 / (g - r) - 1.0 / (rho - r);
    return -g / 2.0 + ca / ((g - r) * (g - r));
  };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iterations = 100;
  const auto bracket = boost::math::tools::toms748_solve(balance, r + 1e-6, rho, tol, iterations);
  const double g = 0.5 * (bracket.first + bracket.second);
  REQUIRE(g > r);
  REQUIRE(g < rho);

  for (double c : {1.0, 10.0, 100.0}) {
    const ControllerParams p = test::controller(5.0, r, rho, c, 20.0);
    const double x_d = 40.0;
    const auto snap = test::snapshot({vehicle(1, x_d - g / 2, 10, Stage::Merge),
                                      vehicle(2, x_d + g / 2, 10, Stage::Merge)},
                                     {x_d, 10, 20});
    CHECK(compute_control(1, snap, p).desired.ux == Approx(20.0).epsilon(1e-6 / 20.0));
    CHECK(compute_control(2, snap, p).desired.ux == Approx(20.0).epsilon(1e-6 / 20.0));

    // off the balanced gap the pair is not at rest
    const auto wide = test::snapshot({vehicle(1, x_d - g / 2 - 0.1, 10, Stage::Merge),
                                      vehicle(2, x_d + g / 2 + 0.1, 10, Stage::Merge)},
                                     {x_d, 10, 20});
    CHECK(compute_control(1, wide, p).desired.ux > 20.0 + 1e-6);
  }
}

TEST_CASE("property: repulsion dominates next to the safe radius") {
  test::Rng rng(53);
  const double r = 3.0;
  const double rho = 4.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const ControllerParams p = test::controller(5.0, r, rho, rng.uniform(1, 200), 20.0);
    const double eps = rng.uniform(1e-6, 0.01 * (rho - r));
    const double x = rng.uniform(-50, 50);
    const bool ahead = rng.coin();
    const double other = ahead ? x + r + eps : x - r - eps;
    const auto snap = test::snapshot(
        {vehicle(1, x, 10, Stage::Merge), vehicle(2, other, 10, Stage::Merge)},
        {x + rng.uniform(-200, 200), 10, 20});
    const double du = compute_control(1, snap, p).desired.ux - 20.0;
    if (ahead) {
      CHECK(du < 0.0);
    } else {
      CHECK(du > 0.0);
    }
  }
}

}  // TEST_SUITE
