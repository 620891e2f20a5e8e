#pragma once

#include <utility>
#include <vector>

#include "aggdef/types.hpp"

namespace aggdef {

// Undirected communication graph for one round. Self-loops are implicit:
// every node is its own neighbor. `weights` is filled by metropolis_weights()
// and is symmetric doubly stochastic with row/column sums 1 within 1e-12.
struct CommGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists, self excluded
  Eigen::MatrixXd weights;            // n x n, empty until weights are built

  bool has_edge(int i, int j) const;
  int degree(int i) const { return static_cast<int>(adj[i].size()); }
  // Neighbor set of i; includes i itself when include_self is true.
  std::vector<int> neighbors(int i, bool include_self = true) const;
  std::vector<std::pair<int, int>> edge_list() const;  // i < j pairs
};

// Edge (i,j) present iff ||pos_i - pos_j|| <= radius. Throws
// std::invalid_argument on non-finite positions or radius <= 0.
CommGraph build_proximity_graph(const std::vector<Vec3>& positions, double radius);

// Metropolis-Hastings weights: a_ij = 1/(1 + max(deg_i, deg_j)) for edges,
// diagonal takes the slack. Always symmetric doubly stochastic on undirected
// graphs; every positive off-diagonal entry is >= 1/(n+1). `laziness` blends
// A <- (1-theta) A + theta I to force positive self-weights.
void metropolis_weights(CommGraph& graph, double laziness = 0.0);

// For each t, whether the union of edge sets over rounds [t, t+window_b]
// (truncated at the end of the sequence) forms a connected graph.
std::vector<bool> check_b_connectivity(const std::vector<CommGraph>& graphs, int window_b);

struct Message {
  int from = -1;
  Vec3 s = Vec3::Zero();
  Vec3 y = Vec3::Zero();
};

// Inbound messages for one agent and one round, ordered by sender id.
using Mailbox = std::vector<Message>;

// Synchronous lossless delivery: agent i receives (s_j, y_j) from every
// j in its neighbor set, itself included. All sends complete before any
// receive becomes visible.
std::vector<Mailbox> exchange(const CommGraph& graph, const std::vector<Vec3>& s_out,
                              const std::vector<Vec3>& y_out);

}  // namespace aggdef
