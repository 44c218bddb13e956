#pragma once

#include <cstddef>
#include <vector>

#include "c2te/cbf.hpp"
#include "c2te/neighbor_graph.hpp"
#include "c2te/slack_qp.hpp"
#include "c2te/vehicle_model.hpp"

namespace c2te {

struct ControllerParams {
  SensingParams sensing;
  double slack_weight = 100.0;  // c
  GammaSpec gamma = GammaSpec::identity();
  double desired_speed = 20.0;  // v_d [m/s]

  bool valid() const {
    return sensing.valid() && slack_weight > 0.0 && gamma.valid() && desired_speed >= 0.0;
  }
};

/// Output of the per-vehicle controller for one step.
struct ControlDecision {
  DesiredVelocity desired;
  Stage stage = Stage::PreMerge;
  /// Ids of the vehicles whose rows were active (the target row is reported
  /// as kTargetRowId).
  std::vector<int> active_ids;
  /// Hard same-lane rows conflicted and the fallback command was used.
  bool fallback = false;
};

inline constexpr int kTargetRowId = -1;

/// Latching stage switch: a PreMerge vehicle moves to Merge once every other
/// vehicle is at least rho away longitudinally.
Stage update_stage(int id, const WorldSnapshot& snap, const ControllerParams& params);

/// Pre-merge regulation: spacing regulation toward the vehicle ahead (slacked)
/// plus hard same-lane collision rows. Lateral command is zero.
ControlDecision stage1_control(int id, const WorldSnapshot& snap,
                               const ControllerParams& params);

/// Merge control: decoupled lateral and longitudinal programs.
/// Throws UnsafeError when a sensed neighbor is within the safe radius.
ControlDecision stage2_control(int id, const WorldSnapshot& snap,
                               const ControllerParams& params);

/// Dispatch on behavior and stage. Pure function of the snapshot.
ControlDecision compute_control(int id, const WorldSnapshot& snap,
                                const ControllerParams& params);

/// The programs stage1_control/stage2_control solve, exposed for inspection.
SlackQp build_stage1_qp(int id, const WorldSnapshot& snap, const ControllerParams& params,
                        std::vector<int>* row_ids = nullptr);
SlackQp build_lateral_qp(int id, const WorldSnapshot& snap, const ControllerParams& params);
SlackQp build_longitudinal_qp(int id, const WorldSnapshot& snap,
                              const ControllerParams& params,
                              std::vector<int>* row_ids = nullptr);

}  // namespace c2te
