#include "aggdef/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace aggdef {

CostGains CostGains::isotropic(CostMode mode, double gamma_p, double gamma_b, double gamma_agg) {
  CostGains g;
  g.Q1 = gamma_p * Mat3::Identity();
  if (mode == CostMode::kBasketball) {
    // Two quadratic terms only: pursuit plus barycenter-to-reference.
    g.Q2 = gamma_agg * Mat3::Identity();
    g.Q3 = Mat3::Zero();
  } else {
    g.Q2 = gamma_b * Mat3::Identity();
    g.Q3 = gamma_agg * Mat3::Identity();
  }
  return g;
}

CostSnapshot CostSnapshot::from_offsets(const Vec3& anchor, const Vec3& p_ref, const Vec3& b_ref,
                                        const std::vector<Vec3>& offsets) {
  CostSnapshot snap;
  snap.p_ref = p_ref;
  snap.b_ref = b_ref;
  snap.neighbor_positions.reserve(offsets.size());
  for (const Vec3& offset : offsets) {
    snap.neighbor_positions.push_back(anchor - offset);
  }
  return snap;
}

Vec3 phi(const Vec3& x) { return x; }

Mat3 phi_jacobian(const Vec3&) { return Mat3::Identity(); }

Vec3 sigma(const std::vector<Vec3>& xs) {
  if (xs.empty()) throw std::invalid_argument("sigma: empty team");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& x : xs) sum += phi(x);
  return sum / static_cast<double>(xs.size());
}

Vec3 tracking_point(CostMode mode, const Vec3& p, const Vec3& anchor, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("tracking_point: lambda outside [0,1]");
  }
  if (mode == CostMode::kBasketball) {
    return lambda * anchor + (1.0 - lambda) * p;
  }
  return lambda * p + (1.0 - lambda) * anchor;
}

Reference make_reference(CostMode mode, const Vec3& p, const Vec3& b, const Vec3& basket,
                         double lambda, double lambda_agg) {
  Reference ref;
  if (mode == CostMode::kBasketball) {
    ref.p_ref = tracking_point(mode, p, basket, lambda);
    ref.b_ref = (1.0 - lambda_agg) * basket + lambda_agg * b;
  } else {
    ref.p_ref = tracking_point(mode, p, b, lambda);
    ref.b_ref = b;
  }
  return ref;
}

double barrier_value(const Vec3& x, const CostSnapshot& snap, const CostGains& gains) {
  if (!gains.barrier_enabled) return 0.0;
  double value = 0.0;
  for (const Vec3& xj : snap.neighbor_positions) {
    value -= std::log(std::max((x - xj).norm(), gains.barrier_epsilon));
  }
  return value;
}

Vec3 barrier_gradient(const Vec3& x, const CostSnapshot& snap, const CostGains& gains) {
  if (!gains.barrier_enabled) return Vec3::Zero();
  Vec3 grad = Vec3::Zero();
  const double eps2 = gains.barrier_epsilon * gains.barrier_epsilon;
  for (const Vec3& xj : snap.neighbor_positions) {
    const Vec3 diff = x - xj;
    Vec3 term = -2.0 * diff / std::max(diff.squaredNorm(), eps2);
    const double norm = term.norm();
    if (norm > gains.barrier_grad_cap) {
      term *= gains.barrier_grad_cap / norm;
    }
    grad += term;
  }
  return grad;
}

double eval_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                 CostMode mode) {
  const Vec3 dp = x - snap.p_ref;
  const Vec3 db = s - snap.b_ref;
  double value = dp.dot(gains.Q1 * dp) + db.dot(gains.Q2 * db);
  if (mode == CostMode::kSurveillance) {
    const Vec3 dc = s - x;
    value += dc.dot(gains.Q3 * dc);
  }
  return value + barrier_value(x, snap, gains);
}

Vec3 grad1_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                CostMode mode) {
  Vec3 grad = 2.0 * gains.Q1 * (x - snap.p_ref);
  if (mode == CostMode::kSurveillance) {
    grad += 2.0 * gains.Q3 * (x - s);
  }
  return grad + barrier_gradient(x, snap, gains);
}

Vec3 grad2_cost(const Vec3& x, const Vec3& s, const CostSnapshot& snap, const CostGains& gains,
                CostMode mode) {
  Vec3 grad = 2.0 * gains.Q2 * (s - snap.b_ref);
  if (mode == CostMode::kSurveillance) {
    grad += 2.0 * gains.Q3 * (s - x);
  }
  return grad;
}

}  // namespace aggdef
