#pragma once

#include <vector>

#include "aggdef/types.hpp"

namespace aggdef {

enum class CostMode { kSurveillance, kBasketball };

// Quadratic gains and barrier settings of one agent's local cost
//   f_i(x, s) = ||x - p_ref||^2_Q1 + ||s - b_ref||^2_Q2 + ||s - x||^2_Q3
//               + sum_j -log(||x - x_j||),
// with the Q3 cohesion term dropped in basketball mode.
struct CostGains {
  Mat3 Q1 = Mat3::Zero();
  Mat3 Q2 = Mat3::Zero();
  Mat3 Q3 = Mat3::Zero();
  double lambda = 0.8;       // press coefficient of the tracking point
  double lambda_agg = 0.5;   // basket/ball blend for the barycenter reference
  bool barrier_enabled = true;
  double barrier_epsilon = 0.05;   // distance guard inside the log
  double barrier_grad_cap = 1e3;   // per-neighbor gradient magnitude cap

  static CostGains isotropic(CostMode mode, double gamma_p, double gamma_b, double gamma_agg);
};

// Frozen data the cost is evaluated against at one round: reference points
// (tracking point and barycenter target) plus the absolute positions of the
// current graph neighbors. Neighbor positions are reconstructed from sensed
// relative offsets, so the barrier stays well-defined at any query point.
struct CostSnapshot {
  Vec3 p_ref = Vec3::Zero();
  Vec3 b_ref = Vec3::Zero();
  std::vector<Vec3> neighbor_positions;

  static CostSnapshot from_offsets(const Vec3& anchor, const Vec3& p_ref, const Vec3& b_ref,
                                   const std::vector<Vec3>& offsets);
};

// Aggregation contribution map; the aggregate sigma is the mean of phi over
// the team. Identity here, so sigma is the barycenter. Swapping in another
// map requires touching only these two functions.
Vec3 phi(const Vec3& x);
Mat3 phi_jacobian(const Vec3& x);

// Mean of phi over all agents; throws std::invalid_argument when empty.
Vec3 sigma(const std::vector<Vec3>& xs);

// Point on the segment between the tracked entity and its anchor.
// Surveillance: lambda p + (1-lambda) anchor, anchor = target.
// Basketball:   lambda anchor + (1-lambda) p, anchor = basket.
Vec3 tracking_point(CostMode mode, const Vec3& p, const Vec3& anchor, double lambda);

struct Reference {
  Vec3 p_ref = Vec3::Zero();
  Vec3 b_ref = Vec3::Zero();
};

// Both reference points from entity positions. Surveillance: b_ref is the
// target itself. Basketball: b_ref blends basket and ball,
// (1 - lambda_agg) basket + lambda_agg ball.
Reference make_reference(CostMode mode, const Vec3& p, const Vec3& b, const Vec3& basket,
                         double lambda, double lambda_agg);

// Collision barrier sum_j -log(max(||x - x_j||, eps)) and its decision
// gradient. The gradient carries a factor 2: every unordered pair appears in
// both endpoints' local sums of the team objective. Each per-neighbor term is
// capped at barrier_grad_cap in norm.
double barrier_value(const Vec3& x, const CostSnapshot& snap, const CostGains& gains);
Vec3 barrier_gradient(const Vec3& x, const CostSnapshot& snap, const CostGains& gains);

double eval_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                 CostMode mode);

// Gradient in the decision variable (includes the factor-2 barrier term).
Vec3 grad1_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                CostMode mode);

// Gradient in the aggregate variable; the barrier does not depend on it.
Vec3 grad2_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                CostMode mode);

}  // namespace aggdef
