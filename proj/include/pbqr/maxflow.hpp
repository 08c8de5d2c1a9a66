#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "pbqr/poly.hpp"

namespace pbqr {

/// s-t network over the nodes of a CapacityForm. Node i < n_vars is variable
/// i; source and sink follow.
class FlowNetwork {
 public:
  struct Arc {
    int to;
    Rational residual;
    int rev;  // index of the paired arc in adjacency(to)
    bool forward;
  };

  explicit FlowNetwork(int n_vars) : n_vars_(n_vars), adj_(n_vars + 2) {}

  int n_vars() const { return n_vars_; }
  int source() const { return n_vars_; }
  int sink() const { return n_vars_ + 1; }
  int n_nodes() const { return n_vars_ + 2; }
  const std::vector<Arc>& adjacency(int v) const { return adj_.at(v); }

  void add_arc(int from, int to, const Rational& cap) {
    if (sgn(cap) < 0) throw std::invalid_argument("negative arc capacity");
    if (from == to) throw std::invalid_argument("self loop");
    const int a = int(adj_.at(from).size());
    const int b = int(adj_.at(to).size());
    adj_[from].push_back({to, cap, b, true});
    adj_[to].push_back({from, Rational(0), a, false});
    ++n_arcs_;
  }

  int arc_count() const { return n_arcs_; }

  // Residual graph access for the solver.
  std::vector<Arc>& mutable_adjacency(int v) { return adj_.at(v); }

 private:
  int n_vars_;
  int n_arcs_ = 0;
  std::vector<std::vector<Arc>> adj_;
};

struct CutResult {
  Rational flow_value;
  std::vector<bool> source_side;  // indexed by network node
  Mask labeling = 0;              // bit i set iff variable node i is on the source side
};

inline FlowNetwork build_network(const CapacityForm& c) {
  c.validate();
  FlowNetwork net(c.n_nodes);
  for (int i = 0; i < c.n_nodes; ++i) {
    if (sgn(c.src_cap[i]) > 0) net.add_arc(net.source(), i, c.src_cap[i]);
    if (sgn(c.sink_cap[i]) > 0) net.add_arc(i, net.sink(), c.sink_cap[i]);
    for (int j = 0; j < c.n_nodes; ++j)
      if (sgn(c.pair_cap[i][j]) > 0) net.add_arc(i, j, c.pair_cap[i][j]);
  }
  return net;
}

/// Edmonds-Karp: BFS shortest augmenting paths. The returned cut is the set
/// reachable from the source in the final residual graph.
inline CutResult max_flow(FlowNetwork net) {
  const int s = net.source();
  const int t = net.sink();
  const int n = net.n_nodes();
  CutResult r;
  r.flow_value = 0;
  std::vector<std::pair<int, int>> parent(n);  // (node, arc index)
  std::vector<bool> seen(n);
  while (true) {
    std::fill(seen.begin(), seen.end(), false);
    std::deque<int> queue{s};
    seen[s] = true;
    while (!queue.empty() && !seen[t]) {
      const int v = queue.front();
      queue.pop_front();
      const auto& arcs = net.adjacency(v);
      for (int a = 0; a < int(arcs.size()); ++a) {
        const auto& arc = arcs[a];
        if (seen[arc.to] || sgn(arc.residual) <= 0) continue;
        seen[arc.to] = true;
        parent[arc.to] = {v, a};
        queue.push_back(arc.to);
      }
    }
    if (!seen[t]) break;
    Rational push = -1;
    for (int v = t; v != s; v = parent[v].first) {
      const auto& arc = net.adjacency(parent[v].first)[parent[v].second];
      if (push < 0 || arc.residual < push) push = arc.residual;
    }
    for (int v = t; v != s; v = parent[v].first) {
      auto& arc = net.mutable_adjacency(parent[v].first)[parent[v].second];
      arc.residual -= push;
      net.mutable_adjacency(arc.to)[arc.rev].residual += push;
    }
    r.flow_value += push;
  }
  r.source_side = seen;
  for (int i = 0; i < net.n_vars(); ++i)
    if (seen[i]) r.labeling |= bit(i);
  return r;
}

/// Sum of original capacities of arcs leaving the source side.
inline Rational cut_capacity(const FlowNetwork& net, const std::vector<bool>& source_side) {
  Rational v = 0;
  for (int u = 0; u < net.n_nodes(); ++u) {
    if (!source_side.at(u)) continue;
    for (const auto& arc : net.adjacency(u))
      if (arc.forward && !source_side.at(arc.to)) v += arc.residual + net.adjacency(arc.to)[arc.rev].residual;
  }
  return v;
}

struct QuadraticMinimum {
  Rational value;
  Mask argmin = 0;
};

inline QuadraticMinimum minimize_quadratic(const QuadraticPoly& h) {
  const CapacityForm cf = to_capacity_form(h);
  const CutResult cut = max_flow(build_network(cf));
  return {cf.c_empty + cut.flow_value, cut.labeling};
}

}  // namespace pbqr
