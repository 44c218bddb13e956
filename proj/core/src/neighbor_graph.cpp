#include "c2te/neighbor_graph.hpp"

#include <cmath>
#include <string>

#include "c2te/errors.hpp"

namespace c2te {

SensingParams SensingParams::with_default_switch(double sensing_radius,
                                                 double safe_radius) {
  return {sensing_radius, safe_radius, 0.5 * (safe_radius + sensing_radius)};
}

std::size_t WorldSnapshot::index_of(int id) const {
  for (std::size_t k = 0; k < vehicles.size(); ++k) {
    if (vehicles[k].id == id) return k;
  }
  throw Error(ErrorKind::UnknownId, "unknown vehicle id " + std::to_string(id));
}

std::optional<int> pre_sensing_neighbor(int id, const WorldSnapshot& snap,
                                        const SensingParams& params) {
  const VehicleState& self = snap.at(id);
  std::optional<int> best;
  double best_gap = 0.0;
  for (const VehicleState& other : snap.vehicles) {
    if (other.id == id) continue;
    const double gap = other.x - self.x;
    if (!(gap > 0.0 && gap <= params.sensing_radius)) continue;
    if (!best || gap < best_gap || (gap == best_gap && other.id < *best)) {
      best = other.id;
      best_gap = gap;
    }
  }
  return best;
}

std::vector<int> same_lane_neighbors(int id, const WorldSnapshot& snap,
                                     const SensingParams& params) {
  const VehicleState& self = snap.at(id);
  std::vector<int> out;
  for (const VehicleState& other : snap.vehicles) {
    if (other.id == id) continue;
    if (std::abs(self.x - other.x) <= params.sensing_radius &&
        std::abs(self.y - other.y) <= kLaneTolerance) {
      out.push_back(other.id);
    }
  }
  return out;
}

std::vector<int> sensing_neighbors(int id, const WorldSnapshot& snap,
                                   const SensingParams& params) {
  const VehicleState& self = snap.at(id);
  const bool merging = self.stage == Stage::Merge;
  std::vector<int> out;
  for (const VehicleState& other : snap.vehicles) {
    if (other.id == id) continue;
    if (merging && other.behavior == Behavior::NonMerging) continue;
    if (std::abs(self.x - other.x) <= params.sensing_radius) out.push_back(other.id);
  }
  return out;
}

}  // namespace c2te
