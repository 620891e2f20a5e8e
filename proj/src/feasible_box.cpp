#include "aggdef/feasible_box.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aggdef {

double adaptive_tolerance(double p_c, double b_c, double kappa_c, double eps_min_c) {
  if (!(kappa_c > 0.0) || !(eps_min_c > 0.0)) {
    throw std::invalid_argument("adaptive_tolerance: kappa and eps_min must be positive");
  }
  const double gap = std::abs(p_c - b_c);
  return std::max(eps_min_c, kappa_c * gap * gap);
}

FeasibleBox build_box(const Vec3& p_hat, const Vec3& b_hat, const Vec3& kappa,
                      const Vec3& eps_min, const FieldBox& field) {
  if (!p_hat.allFinite() || !b_hat.allFinite()) {
    throw std::invalid_argument("build_box: non-finite inputs");
  }
  FeasibleBox box;
  for (int c = 0; c < 3; ++c) {
    const double eps = adaptive_tolerance(p_hat[c], b_hat[c], kappa[c], eps_min[c]);
    double lo, hi;
    if (p_hat[c] <= b_hat[c]) {
      lo = p_hat[c] + eps;
      hi = b_hat[c];
    } else {
      lo = b_hat[c];
      hi = p_hat[c] - eps;
    }
    lo = std::max(lo, field.lower[c]);
    hi = std::min(hi, field.upper[c]);
    if (lo > hi) {
      // Empty interval: fall back to guarding the target coordinate.
      const double point = std::clamp(b_hat[c], field.lower[c], field.upper[c]);
      lo = hi = point;
      ++box.repaired_components;
    }
    box.lower[c] = lo;
    box.upper[c] = hi;
  }
  return box;
}

Vec3 project(const Vec3& x, const FeasibleBox& box) {
  Vec3 out;
  for (int c = 0; c < 3; ++c) {
    out[c] = std::clamp(x[c], box.lower[c], box.upper[c]);
  }
  return out;
}

bool contains(const FeasibleBox& box, const Vec3& x) {
  for (int c = 0; c < 3; ++c) {
    if (x[c] < box.lower[c] || x[c] > box.upper[c]) return false;
  }
  return true;
}

}  // namespace aggdef
