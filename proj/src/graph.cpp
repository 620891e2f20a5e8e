#include "aggdef/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace aggdef {

bool CommGraph::has_edge(int i, int j) const {
  if (i == j) return true;  // implicit self-loop
  const auto& row = adj[i];
  return std::binary_search(row.begin(), row.end(), j);
}

std::vector<int> CommGraph::neighbors(int i, bool include_self) const {
  std::vector<int> out = adj[i];
  if (include_self) {
    out.insert(std::lower_bound(out.begin(), out.end(), i), i);
  }
  return out;
}

std::vector<std::pair<int, int>> CommGraph::edge_list() const {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (i < j) edges.emplace_back(i, j);
    }
  }
  return edges;
}

CommGraph build_proximity_graph(const std::vector<Vec3>& positions, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("build_proximity_graph: radius must be positive");
  }
  for (const Vec3& p : positions) {
    if (!p.allFinite()) {
      throw std::invalid_argument("build_proximity_graph: non-finite position");
    }
  }
  CommGraph g;
  g.n = static_cast<int>(positions.size());
  g.adj.assign(g.n, {});
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if ((positions[i] - positions[j]).norm() <= radius) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
    }
  }
  for (auto& row : g.adj) std::sort(row.begin(), row.end());
  return g;
}

void metropolis_weights(CommGraph& graph, double laziness) {
  if (laziness < 0.0 || laziness >= 1.0) {
    throw std::invalid_argument("metropolis_weights: laziness must lie in [0,1)");
  }
  const int n = graph.n;
  graph.weights = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off_sum = 0.0;
    for (int j : graph.adj[i]) {
      const double w = 1.0 / (1.0 + std::max(graph.degree(i), graph.degree(j)));
      graph.weights(i, j) = w;
      off_sum += w;
    }
    graph.weights(i, i) = 1.0 - off_sum;
  }
  if (laziness > 0.0) {
    graph.weights *= (1.0 - laziness);
    graph.weights.diagonal().array() += laziness;
  }
}

namespace {

// Union-find over node ids; the test suite checks this against an
// independent BFS oracle.
class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

std::vector<bool> check_b_connectivity(const std::vector<CommGraph>& graphs, int window_b) {
  if (window_b < 0) throw std::invalid_argument("check_b_connectivity: negative window");
  const int rounds = static_cast<int>(graphs.size());
  std::vector<bool> connected(rounds, false);
  if (rounds == 0) return connected;
  const int n = graphs.front().n;
  for (const CommGraph& g : graphs) {
    if (g.n != n) throw std::invalid_argument("check_b_connectivity: mismatched node counts");
  }
  for (int t = 0; t < rounds; ++t) {
    DisjointSet ds(n);
    const int last = std::min(rounds - 1, t + window_b);
    for (int tau = t; tau <= last; ++tau) {
      for (int i = 0; i < n; ++i) {
        for (int j : graphs[tau].adj[i]) {
          if (i < j) ds.unite(i, j);
        }
      }
    }
    int root = ds.find(0);
    bool ok = true;
    for (int i = 1; i < n; ++i) ok = ok && (ds.find(i) == root);
    connected[t] = ok;
  }
  return connected;
}

std::vector<Mailbox> exchange(const CommGraph& graph, const std::vector<Vec3>& s_out,
                              const std::vector<Vec3>& y_out) {
  if (static_cast<int>(s_out.size()) != graph.n || static_cast<int>(y_out.size()) != graph.n) {
    throw std::invalid_argument("exchange: payload count does not match graph size");
  }
  std::vector<Mailbox> boxes(graph.n);
  for (int i = 0; i < graph.n; ++i) {
    for (int j : graph.neighbors(i, /*include_self=*/true)) {
      boxes[i].push_back(Message{j, s_out[j], y_out[j]});
    }
  }
  return boxes;
}

}  // namespace aggdef
