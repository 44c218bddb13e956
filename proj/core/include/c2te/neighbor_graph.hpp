#pragma once

#include <optional>
#include <span>
#include <vector>

#include "c2te/vehicle_model.hpp"

namespace c2te {

/// Two vehicles share a lane when their lateral positions differ by at most this.
inline constexpr double kLaneTolerance = 1e-6;

struct SensingParams {
  double sensing_radius = 5.0;  // R [m]
  double safe_radius = 3.0;     // r [m]
  double switch_radius = 4.0;   // rho [m], in (r, R)

  /// rho defaults to the midpoint of (r, R).
  static SensingParams with_default_switch(double sensing_radius, double safe_radius);

  bool valid() const {
    return safe_radius > 0.0 && safe_radius < switch_radius &&
           switch_radius < sensing_radius;
  }
};

/// Immutable view of the world at one instant. Vehicle order is fixed for a run.
struct WorldSnapshot {
  double time = 0.0;
  std::vector<VehicleState> vehicles;
  VirtualTarget target;

  /// Index of vehicle `id`; throws Error(UnknownId).
  std::size_t index_of(int id) const;
  const VehicleState& at(int id) const { return vehicles[index_of(id)]; }
};

/// Nearest vehicle strictly ahead within R (ties: smallest id).
std::optional<int> pre_sensing_neighbor(int id, const WorldSnapshot& snap,
                                        const SensingParams& params);

/// Vehicles within R longitudinally on the same lane, in snapshot order.
std::vector<int> same_lane_neighbors(int id, const WorldSnapshot& snap,
                                     const SensingParams& params);

/// Vehicles within R longitudinally regardless of lane. NonMerging vehicles
/// are dropped when the querying vehicle is in the Merge stage.
std::vector<int> sensing_neighbors(int id, const WorldSnapshot& snap,
                                   const SensingParams& params);

}  // namespace c2te
