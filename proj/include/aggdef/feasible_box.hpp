#pragma once

#include "aggdef/types.hpp"

namespace aggdef {

// Operating region, axis aligned.
struct FieldBox {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();
};

// Componentwise band between the (predicted) intruder and the target,
// intersected with the field. lower <= upper holds after degeneracy repair.
struct FeasibleBox {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();
  int repaired_components = 0;
};

// eps_c = max(eps_min_c, kappa_c |p_c - b_c|^2): the stand-off margin grows
// quadratically with the per-component intruder-target separation.
double adaptive_tolerance(double p_c, double b_c, double kappa_c, double eps_min_c);

// Per component: [p_c + eps_c, b_c] when p_c <= b_c, else [b_c, p_c - eps_c],
// intersected with the field. An empty component interval collapses to the
// singleton closest to b_c inside the field and is counted as repaired.
FeasibleBox build_box(const Vec3& p_hat, const Vec3& b_hat, const Vec3& kappa,
                      const Vec3& eps_min, const FieldBox& field);

// Componentwise clamp == Euclidean projection onto the box.
Vec3 project(const Vec3& x, const FeasibleBox& box);

// Exact membership (closed intervals, no tolerance).
bool contains(const FeasibleBox& box, const Vec3& x);

}  // namespace aggdef
