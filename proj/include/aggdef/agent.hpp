#pragma once

#include "aggdef/cost.hpp"
#include "aggdef/feasible_box.hpp"
#include "aggdef/graph.hpp"
#include "aggdef/kalman.hpp"

namespace aggdef {

// Which feasible box the projected step uses: the one predicted in the same
// round (default) or the one carried from the previous round.
enum class BoxTiming { kPredicted, kPrevious };

// Private state of one defender: decision x, aggregate tracker s, gradient
// tracker y, its Kalman filter, and the update coefficients.
struct AgentState {
  Vec3 x = Vec3::Zero();
  Vec3 s = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  StackedFilter filter;
  CostGains gains;
  double alpha = 0.2;  // gradient step size
  double delta = 0.4;  // convex combination coefficient
};

// x0 is projected into box0; s starts at phi(x0) and y at the aggregate
// gradient of the initial cost, which seeds the exact mean-conservation of
// both trackers.
AgentState init_agent(const Vec3& x0, const FeasibleBox& box0, const CostSnapshot& snap0,
                      const CostGains& gains, double alpha, double delta, StackedFilter filter,
                      CostMode mode);

struct StepResult {
  AgentState next;
  Vec3 x_tilde = Vec3::Zero();
  BoxTiming box_used = BoxTiming::kPredicted;
};

// One optimize round:
//   x~  = project(x - alpha (grad1 f^t + Dphi^T y), box)
//   x+  = x + delta (x~ - x)
//   s+  = sum_j a_ij s_j + phi(x+) - phi(x)
//   y+  = sum_j a_ij y_j + grad2 f^{t+1}(x+, s+) - grad2 f^t(x, s)
// The mailbox must contain exactly the senders with positive weight in
// weight_row; anything else is a transport protocol error (std::logic_error).
StepResult optimize_step(const AgentState& state, const Mailbox& mailbox,
                         const Eigen::VectorXd& weight_row, const CostSnapshot& snap_t,
                         const CostSnapshot& snap_t1, const FeasibleBox& box_t,
                         const FeasibleBox& box_t1, CostMode mode, BoxTiming timing);

}  // namespace aggdef
