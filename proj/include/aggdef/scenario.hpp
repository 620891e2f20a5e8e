#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aggdef/cost.hpp"
#include "aggdef/feasible_box.hpp"
#include "aggdef/graph.hpp"

namespace aggdef {

// Piecewise-linear trajectory with optional instantaneous relocations
// (e.g. a ball pass). An event at time te replaces the path from te onward:
// position jumps to the event point and interpolation resumes toward the
// waypoints after te. Sampling outside the covered range clamps to the ends.
struct TrajectoryEvent {
  double time = 0.0;
  Vec3 position = Vec3::Zero();
};

struct TrajectorySpec {
  std::vector<std::pair<double, Vec3>> waypoints;  // strictly increasing times
  std::vector<TrajectoryEvent> events;             // strictly increasing times
};

struct Kinematics {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

// Linear interpolation between bracketing anchors; velocity is the segment
// slope, and exactly at an event time the velocity is zero.
Kinematics sample_trajectory(const TrajectorySpec& spec, double t);

struct AgentSpec {
  Vec3 x0 = Vec3::Zero();
  double gamma_p = 1.0;    // pursuit gain (Q1)
  double gamma_b = 1.0;    // barycenter-to-target gain (Q2, surveillance)
  double gamma_agg = 0.0;  // cohesion gain (Q3) or barycenter gain in basketball
  double lambda = 0.8;
};

struct NoiseSpec {
  double process_sigma2 = 10.0;
  bool process_iso = true;       // sigma2 * I (iso) vs G G^T sigma2 (ggt)
  double measurement_r = 1e-4;   // R = r * I3 per measured entity
  double dropout = 0.0;
  double sensing_sigma = 0.0;    // optional noise on sensed neighbor offsets
};

struct ScenarioSpec {
  std::string name = "custom";
  CostMode mode = CostMode::kSurveillance;
  int horizon = 3000;
  double dt = 0.01;
  double comm_radius = 9.0;
  double laziness = 0.0;
  int b_window = 1;
  FieldBox field;
  Vec3 kappa = Vec3::Constant(0.01);
  Vec3 eps_min = Vec3::Constant(0.1);
  double alpha = 0.2;
  double delta = 0.4;
  double lambda_agg = 0.5;           // basketball only
  Vec3 basket = Vec3::Zero();        // basketball only
  bool barrier_enabled = true;
  double barrier_epsilon = 0.05;
  double barrier_grad_cap = 1e3;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  double v_max = 1.0;  // trajectory sanity guard [m/s]
  std::vector<AgentSpec> agents;
  std::vector<TrajectorySpec> intruders;  // one per defender, fixed pairing
  TrajectorySpec target;                  // target (surveillance) or ball

  int team_size() const { return static_cast<int>(agents.size()); }
  CostGains gains_for(int i) const;
  void validate() const;  // throws std::invalid_argument on inconsistency
};

bool operator==(const TrajectorySpec& a, const TrajectorySpec& b);
bool operator==(const ScenarioSpec& a, const ScenarioSpec& b);

// Built-in scenarios. Unknown names throw std::invalid_argument listing the
// valid choices.
ScenarioSpec preset(const std::string& name);
std::vector<std::string> preset_names();

// Ground truth at one instant; defender positions are maintained by the
// simulation driver.
struct WorldState {
  double time = 0.0;
  std::vector<Vec3> intruder_pos;
  std::vector<Vec3> intruder_vel;
  Vec3 target_pos = Vec3::Zero();
  Vec3 target_vel = Vec3::Zero();
  std::vector<Vec3> defender_pos;
};

WorldState world_at(const ScenarioSpec& spec, double time);

// Relative offsets x_i - x_j for the round's graph neighbors (self excluded),
// ordered by neighbor id. This is the range-sensing abstraction.
std::vector<Vec3> sensed_offsets(const WorldState& world, int i, const CommGraph& graph);

// YAML round-trip; parsing rejects structurally invalid documents.
std::string serialize_scenario(const ScenarioSpec& spec);
ScenarioSpec parse_scenario(const std::string& yaml_text);
ScenarioSpec load_scenario_file(const std::string& path);

}  // namespace aggdef
