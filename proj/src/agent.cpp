#include "aggdef/agent.hpp"

#include <stdexcept>
#include <utility>

namespace aggdef {

AgentState init_agent(const Vec3& x0, const FeasibleBox& box0, const CostSnapshot& snap0,
                      const CostGains& gains, double alpha, double delta, StackedFilter filter,
                      CostMode mode) {
  if (!(alpha > 0.0)) throw std::invalid_argument("init_agent: alpha must be positive");
  if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("init_agent: delta outside [0,1]");
  AgentState st;
  st.x = project(x0, box0);
  st.s = phi(st.x);
  st.gains = gains;
  st.y = grad2_cost(st.x, st.s, snap0, gains, mode);
  st.filter = std::move(filter);
  st.alpha = alpha;
  st.delta = delta;
  return st;
}

StepResult optimize_step(const AgentState& state, const Mailbox& mailbox,
                         const Eigen::VectorXd& weight_row, const CostSnapshot& snap_t,
                         const CostSnapshot& snap_t1, const FeasibleBox& box_t,
                         const FeasibleBox& box_t1, CostMode mode, BoxTiming timing) {
  const FeasibleBox& proj_box = (timing == BoxTiming::kPredicted) ? box_t1 : box_t;

  const Vec3 g1 = grad1_cost(state.x, state.s, snap_t, state.gains, mode);
  const Vec3 descent = g1 + phi_jacobian(state.x).transpose() * state.y;
  const Vec3 x_tilde = project(state.x - state.alpha * descent, proj_box);
  const Vec3 x_next = state.x + state.delta * (x_tilde - state.x);

  // Consensus mixing over the round's neighbor messages. The bus is
  // lossless, so a positive weight without a matching message is a bug in
  // the caller, not a network condition.
  Vec3 s_mix = Vec3::Zero();
  Vec3 y_mix = Vec3::Zero();
  double weight_seen = 0.0;
  for (const Message& msg : mailbox) {
    const double w = weight_row(msg.from);
    if (w < 0.0) throw std::logic_error("optimize_step: negative mixing weight");
    s_mix += w * msg.s;
    y_mix += w * msg.y;
    weight_seen += w;
  }
  if (std::abs(weight_seen - 1.0) > 1e-9) {
    throw std::logic_error("optimize_step: mailbox does not cover the weight row");
  }

  StepResult result;
  result.x_tilde = x_tilde;
  result.box_used = timing;
  result.next = state;
  result.next.x = x_next;
  result.next.s = s_mix + phi(x_next) - phi(state.x);
  result.next.y = y_mix + grad2_cost(x_next, result.next.s, snap_t1, state.gains, mode) -
                  grad2_cost(state.x, state.s, snap_t, state.gains, mode);
  return result;
}

}  // namespace aggdef
