#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <c2te/controller.hpp>
#include <c2te/neighbor_graph.hpp>
#include <c2te/scenario.hpp>
#include <c2te/trajectory.hpp>

namespace c2te::test {

inline VehicleState vehicle(int id, double x, double y = 0.0, Stage stage = Stage::PreMerge,
                            Behavior behavior = Behavior::Normal) {
  VehicleState s;
  s.id = id;
  s.x = x;
  s.y = y;
  s.stage = stage;
  s.behavior = behavior;
  return s;
}

inline WorldSnapshot snapshot(std::vector<VehicleState> vehicles, VirtualTarget target = {}) {
  WorldSnapshot snap;
  snap.vehicles = std::move(vehicles);
  snap.target = target;
  return snap;
}

inline ControllerParams controller(double R = 5.0, double r = 3.0, double rho = 4.0,
                                   double c = 100.0, double v_d = 20.0) {
  ControllerParams p;
  p.sensing = {R, r, rho};
  p.slack_weight = c;
  p.desired_speed = v_d;
  return p;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

template <class F>
double central_difference(F&& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::filesystem::path scenarios_dir() { return C2TE_SCENARIOS_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("c2te-unit-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string to_jsonl(const TrajectoryLog& log) {
  std::ostringstream out;
  write_jsonl(out, log);
  return out.str();
}

/// Minimal valid scenario: the vehicles given, on lanes {0, 3.5, 7}, desired lane 7.
inline Scenario small_scenario(std::vector<VehicleSpec> vehicles, double t_end = 2.0) {
  Scenario sc;
  sc.name = "unit";
  sc.lanes = {0.0, 3.5, 7.0};
  sc.desired_lane_y = 7.0;
  sc.controller = controller();
  sc.target0 = {30.0, 7.0, 20.0};
  sc.dt = 0.01;
  sc.t_end = t_end;
  sc.vehicles = std::move(vehicles);
  return sc;
}

inline VehicleSpec spec(int id, double x, double y) {
  VehicleSpec v;
  v.state = vehicle(id, x, y);
  v.params.base_length = 2.0;
  v.params.virtual_offset = 1.0;
  return v;
}

}  // namespace c2te::test
