#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aggdef/agent.hpp"
#include "aggdef/metrics.hpp"
#include "aggdef/scenario.hpp"

namespace aggdef {

// A full run: scenario plus execution switches. The effective master seed is
// the override when present, the scenario's otherwise.
struct RunConfig {
  ScenarioSpec scenario;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool oracle_enabled = true;
  bool prediction_enabled = true;
  BoxTiming box_timing = BoxTiming::kPredicted;
  double kalman_p0 = 1.0;
  bool kalman_strict_zero_init = false;  // start covariances at exactly zero
  std::optional<bool> barrier_override;
  bool trace_graph = false;
};

struct RunSummary {
  std::string scenario_name;
  int agents = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  bool oracle_enabled = false;
  bool barrier_enabled = false;
  bool prediction_enabled = true;

  double regret = 0.0;  // NaN when the oracle is off
  long oracle_nonconverged = 0;

  double max_s_consensus_err = 0.0;     // max_t max_i ||s_i - sigma(x)||
  double max_y_consensus_err = 0.0;     // max_t ||mean(y) - mean(grad2)||
  double max_s_conservation_err = 0.0;  // max_t ||mean(s) - sigma(x)||
  double max_y_conservation_err = 0.0;  // max_t ||sum(y) - sum(grad2)||

  double min_pairwise_distance = 0.0;
  long repair_count = 0;
  long projection_violations = 0;   // projected point outside its box (exact)
  long combination_violations = 0;  // combined iterate outside the round box
  int b_connectivity_violations = 0;

  // Scene statistics averaged over the final fifth of the run.
  double final_defender_intruder_dist = 0.0;
  double final_barycenter_target_dist = 0.0;
  double final_defender_spread = 0.0;

  long trace_records = 0;
  double wall_seconds = 0.0;
};

// Executes the measure -> predict -> optimize loop for horizon + 1 rounds,
// writing trace.csv, metrics.csv, scenario.yaml and summary.txt into the
// output directory.
RunSummary run(const RunConfig& config);

// Recomputes realized and oracle costs for every round of a finished run
// from its scenario.yaml and trace.csv. Deterministic, so it reproduces the
// in-run regret exactly.
struct ReplayResult {
  RegretLedger ledger;
  long oracle_nonconverged = 0;
  int horizon = 0;
  int agents = 0;
};

ReplayResult replay_oracle(const std::string& run_dir);

// The full-information problem instance at one round, built from true entity
// positions and the realized graph. Shared by the in-run metrics, the replay
// path, and the tests.
OracleProblem true_problem(const ScenarioSpec& spec, const WorldState& world,
                           const CommGraph& graph);

}  // namespace aggdef
