#include "c2te/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "c2te/errors.hpp"

namespace c2te {

namespace {

ConstraintRow cbf_row(const PhiEval& phi, const GammaSpec& gamma, double shift, bool slacked) {
  return {phi.grad, gamma_eval(gamma, phi.value), shift, slacked};
}

std::vector<int> active_ids_of(const QpSolution& sol, const std::vector<int>& row_ids) {
  std::vector<int> out;
  out.reserve(sol.active_set.size());
  for (std::size_t k : sol.active_set) out.push_back(row_ids[k]);
  return out;
}

// Least worst-violation command when the hard rows cannot all hold.
double fallback_command(const HardInterval& hard) {
  if (hard.lower > hard.upper) return 0.5 * (hard.lower + hard.upper);
  // only a zero-gradient row conflicts; no u can repair it
  return std::clamp(0.0, hard.lower, hard.upper);
}

}  // namespace

Stage update_stage(int id, const WorldSnapshot& snap, const ControllerParams& params) {
  const VehicleState& self = snap.at(id);
  if (self.stage == Stage::Merge) return Stage::Merge;
  for (const VehicleState& other : snap.vehicles) {
    if (other.id == id) continue;
    if (std::abs(self.x - other.x) < params.sensing.switch_radius) return Stage::PreMerge;
  }
  return Stage::Merge;
}

SlackQp build_stage1_qp(int id, const WorldSnapshot& snap, const ControllerParams& params,
                        std::vector<int>* row_ids) {
  const VehicleState& self = snap.at(id);
  SlackQp qp;
  qp.u_ref = 0.0;
  qp.c = params.slack_weight;
  if (auto ahead = pre_sensing_neighbor(id, snap, params.sensing)) {
    const PhiEval phi =
        phi_long_regulation(self.x, snap.at(*ahead).x, params.sensing.sensing_radius);
    qp.rows.push_back(cbf_row(phi, params.gamma, 0.0, true));
    if (row_ids) row_ids->push_back(*ahead);
  }
  for (int other : same_lane_neighbors(id, snap, params.sensing)) {
    const PhiEval phi = phi_same_lane(self.x, snap.at(other).x, params.sensing.safe_radius);
    qp.rows.push_back(cbf_row(phi, params.gamma, 0.0, false));
    if (row_ids) row_ids->push_back(other);
  }
  return qp;
}

ControlDecision stage1_control(int id, const WorldSnapshot& snap,
                               const ControllerParams& params) {
  std::vector<int> row_ids;
  const SlackQp qp = build_stage1_qp(id, snap, params, &row_ids);
  const QpSolution sol = solve_active_set(qp);

  ControlDecision out;
  out.stage = Stage::PreMerge;
  double u = sol.u;
  if (sol.status == QpStatus::InfeasibleHard) {
    u = fallback_command(sol.hard);
    out.fallback = true;
  } else {
    out.active_ids = active_ids_of(sol, row_ids);
  }
  // Uniform cruise offset; relative spacing is unaffected.
  out.desired = {u + params.desired_speed, 0.0};
  return out;
}

SlackQp build_lateral_qp(int id, const WorldSnapshot& snap, const ControllerParams& params) {
  const VehicleState& self = snap.at(id);
  SlackQp qp;
  qp.u_ref = 0.0;
  qp.c = params.slack_weight;
  qp.rows.push_back(cbf_row(phi_lateral(self.y, snap.target.y), params.gamma, 0.0, true));
  return qp;
}

SlackQp build_longitudinal_qp(int id, const WorldSnapshot& snap,
                              const ControllerParams& params, std::vector<int>* row_ids) {
  const VehicleState& self = snap.at(id);
  const double v_d = params.desired_speed;
  SlackQp qp;
  qp.u_ref = v_d;
  qp.c = params.slack_weight;
  qp.rows.push_back(cbf_row(phi_target(self.x, snap.target.x), params.gamma, v_d, true));
  if (row_ids) row_ids->push_back(kTargetRowId);
  for (int other : sensing_neighbors(id, snap, params.sensing)) {
    const VehicleState& nb = snap.at(other);
    PhiEval phi;
    try {
      phi = phi_neighbor_ca(self.x, nb.x, params.sensing.safe_radius,
                            params.sensing.switch_radius);
    } catch (const UnsafeError& e) {
      std::ostringstream msg;
      msg << "collision: vehicles " << id << " and " << other << " at longitudinal distance "
          << e.distance() << " <= r=" << params.sensing.safe_radius << " (t=" << snap.time
          << ")";
      throw UnsafeError(id, other, e.distance(), msg.str());
    }
    qp.rows.push_back(cbf_row(phi, params.gamma, v_d, true));
    if (row_ids) row_ids->push_back(other);
  }
  return qp;
}

ControlDecision stage2_control(int id, const WorldSnapshot& snap,
                               const ControllerParams& params) {
  ControlDecision out;
  out.stage = Stage::Merge;

  const QpSolution lateral = solve_active_set(build_lateral_qp(id, snap, params));

  std::vector<int> row_ids;
  const SlackQp longitudinal_qp = build_longitudinal_qp(id, snap, params, &row_ids);
  const QpSolution longitudinal = solve_active_set(longitudinal_qp);

  out.desired = {longitudinal.u, lateral.u};
  out.active_ids = active_ids_of(longitudinal, row_ids);
  return out;
}

ControlDecision compute_control(int id, const WorldSnapshot& snap,
                                const ControllerParams& params) {
  const VehicleState& self = snap.at(id);
  ControlDecision out;
  out.stage = self.stage;
  switch (self.behavior) {
    case Behavior::Broken:
      out.desired = {0.0, 0.0};
      return out;
    case Behavior::NonMerging:
      out.desired = {self.cruise_speed.value_or(params.desired_speed), 0.0};
      return out;
    case Behavior::Normal:
      break;
  }
  if (update_stage(id, snap, params) == Stage::Merge) return stage2_control(id, snap, params);
  return stage1_control(id, snap, params);
}

}  // namespace c2te
