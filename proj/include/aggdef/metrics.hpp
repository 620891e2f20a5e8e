#pragma once

#include <vector>

#include "aggdef/agent.hpp"
#include "aggdef/cost.hpp"
#include "aggdef/feasible_box.hpp"
#include "aggdef/graph.hpp"

namespace aggdef {

// Full-information instance of the team problem at one round: per-agent
// references and boxes built from true entity positions, plus the realized
// communication graph that fixes the barrier neighbor sets.
struct OracleProblem {
  CostMode mode = CostMode::kSurveillance;
  std::vector<CostGains> gains;
  std::vector<Reference> refs;
  std::vector<FeasibleBox> boxes;
  const CommGraph* graph = nullptr;

  int team_size() const { return static_cast<int>(gains.size()); }
};

// Team objective sum_i f_i(x_i, sigma(x), x_{N_i}) at a stacked decision.
double global_cost(const OracleProblem& problem, const std::vector<Vec3>& x);

// Stacked gradient block of the team objective for agent i.
std::vector<Vec3> global_gradient(const OracleProblem& problem, const std::vector<Vec3>& x);

struct OracleResult {
  std::vector<Vec3> x_star;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double fixed_point_residual = 0.0;
  double step_size = 0.0;
};

// Projected gradient on the team objective, warm-started, run until the step
// norm drops below step_tol or the iteration cap is hit. With the barrier
// disabled the problem is strongly convex and the result is the minimizer;
// with the barrier enabled it is a stationary point.
OracleResult centralized_oracle(const OracleProblem& problem, const std::vector<Vec3>& x_warm,
                                double step_tol = 1e-10, int max_iter = 100000);

// Running record of realized vs oracle cost. The cumulative regret sums the
// per-round gaps from round 1 onward.
struct RegretLedger {
  std::vector<double> realized;
  std::vector<double> oracle_value;
  std::vector<double> gap;
  double total = 0.0;

  void add(int t, double realized_cost, double oracle_cost);
};

struct TrackingErrors {
  double s_err = 0.0;  // max_i || s_i - sigma(x) ||
  double y_err = 0.0;  // || mean(y) - mean(grad2 f_i) ||
};

TrackingErrors tracking_errors(const std::vector<Vec3>& s, const std::vector<Vec3>& y,
                               const std::vector<Vec3>& x, const std::vector<Vec3>& grad2_hat);

double min_pairwise_distance(const std::vector<Vec3>& xs);

}  // namespace aggdef
