#include "aggdef/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aggdef {

namespace {

CostSnapshot snapshot_for(const OracleProblem& problem, const std::vector<Vec3>& x, int i) {
  CostSnapshot snap;
  snap.p_ref = problem.refs[i].p_ref;
  snap.b_ref = problem.refs[i].b_ref;
  for (int j : problem.graph->neighbors(i, /*include_self=*/false)) {
    snap.neighbor_positions.push_back(x[j]);
  }
  return snap;
}

}  // namespace

double global_cost(const OracleProblem& problem, const std::vector<Vec3>& x) {
  const Vec3 agg = sigma(x);
  double total = 0.0;
  for (int i = 0; i < problem.team_size(); ++i) {
    total += eval_cost(x[i], agg, snapshot_for(problem, x, i), problem.gains[i], problem.mode);
  }
  return total;
}

std::vector<Vec3> global_gradient(const OracleProblem& problem, const std::vector<Vec3>& x) {
  const int n = problem.team_size();
  const Vec3 agg = sigma(x);
  // Mean of the aggregate-variable gradients; every block sees it through
  // the (identity) aggregation Jacobian.
  Vec3 mean_grad2 = Vec3::Zero();
  std::vector<CostSnapshot> snaps;
  snaps.reserve(n);
  for (int i = 0; i < n; ++i) {
    snaps.push_back(snapshot_for(problem, x, i));
    mean_grad2 += grad2_cost(x[i], agg, snaps[i], problem.gains[i], problem.mode);
  }
  mean_grad2 /= static_cast<double>(n);
  std::vector<Vec3> grad(n);
  for (int i = 0; i < n; ++i) {
    grad[i] = grad1_cost(x[i], agg, snaps[i], problem.gains[i], problem.mode) +
              phi_jacobian(x[i]).transpose() * mean_grad2;
  }
  return grad;
}

namespace {

// Largest eigenvalue of the quadratic part's Hessian, assembled exactly from
// the gradient map (affine when the barrier is off).
double quadratic_lipschitz(const OracleProblem& problem) {
  OracleProblem quad = problem;
  for (CostGains& g : quad.gains) g.barrier_enabled = false;
  const int n = problem.team_size();
  const int dim = 3 * n;
  std::vector<Vec3> zero(n, Vec3::Zero());
  const std::vector<Vec3> g0 = global_gradient(quad, zero);
  Eigen::MatrixXd hess(dim, dim);
  for (int k = 0; k < dim; ++k) {
    std::vector<Vec3> unit(n, Vec3::Zero());
    unit[k / 3][k % 3] = 1.0;
    const std::vector<Vec3> gk = global_gradient(quad, unit);
    for (int i = 0; i < n; ++i) {
      hess.block<3, 1>(3 * i, k) = gk[i] - g0[i];
    }
  }
  const Eigen::MatrixXd sym = 0.5 * (hess + hess.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  return std::max(eig.eigenvalues().maxCoeff(), 1e-12);
}

double stacked_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace

OracleResult centralized_oracle(const OracleProblem& problem, const std::vector<Vec3>& x_warm,
                                double step_tol, int max_iter) {
  const int n = problem.team_size();
  if (static_cast<int>(x_warm.size()) != n || problem.graph == nullptr) {
    throw std::invalid_argument("centralized_oracle: malformed problem");
  }
  bool any_barrier = false;
  for (const CostGains& g : problem.gains) any_barrier = any_barrier || g.barrier_enabled;

  OracleResult res;
  res.x_star.resize(n);
  for (int i = 0; i < n; ++i) res.x_star[i] = project(x_warm[i], problem.boxes[i]);

  double eta = 1.0 / quadratic_lipschitz(problem);
  double value = global_cost(problem, res.x_star);

  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const std::vector<Vec3> grad = global_gradient(problem, res.x_star);
    std::vector<Vec3> candidate(n);
    double cand_value = 0.0;
    int halvings = 0;
    for (;;) {
      for (int i = 0; i < n; ++i) {
        candidate[i] = project(res.x_star[i] - eta * grad[i], problem.boxes[i]);
      }
      cand_value = global_cost(problem, candidate);
      // The barrier can break the quadratic step bound; halve until the step
      // is non-increasing. Pure quadratic instances never enter the loop.
      if (!any_barrier || cand_value <= value + 1e-12 || halvings >= 60) break;
      eta *= 0.5;
      ++halvings;
    }
    const double step = stacked_distance(candidate, res.x_star);
    res.x_star = candidate;
    value = cand_value;
    if (step <= step_tol) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  res.value = value;

  const std::vector<Vec3> grad = global_gradient(problem, res.x_star);
  std::vector<Vec3> probe(n);
  for (int i = 0; i < n; ++i) {
    probe[i] = project(res.x_star[i] - eta * grad[i], problem.boxes[i]);
  }
  res.fixed_point_residual = stacked_distance(probe, res.x_star);
  res.step_size = eta;
  return res;
}

void RegretLedger::add(int t, double realized_cost, double oracle_cost) {
  realized.push_back(realized_cost);
  oracle_value.push_back(oracle_cost);
  const double g = realized_cost - oracle_cost;
  gap.push_back(g);
  if (t >= 1) total += g;
}

TrackingErrors tracking_errors(const std::vector<Vec3>& s, const std::vector<Vec3>& y,
                               const std::vector<Vec3>& x, const std::vector<Vec3>& grad2_hat) {
  TrackingErrors err;
  const Vec3 agg = sigma(x);
  for (const Vec3& si : s) {
    err.s_err = std::max(err.s_err, (si - agg).norm());
  }
  Vec3 y_mean = Vec3::Zero();
  Vec3 g_mean = Vec3::Zero();
  for (std::size_t i = 0; i < y.size(); ++i) {
    y_mean += y[i];
    g_mean += grad2_hat[i];
  }
  err.y_err = (y_mean - g_mean).norm() / static_cast<double>(y.size());
  return err;
}

double min_pairwise_distance(const std::vector<Vec3>& xs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      best = std::min(best, (xs[i] - xs[j]).norm());
    }
  }
  return best;
}

}  // namespace aggdef
