#pragma once

// Zero-temperature random-field Ising states by minimum cut.

#include <cstdint>
#include <vector>

#include "peierls/disorder.hpp"
#include "peierls/model.hpp"

namespace peierls {

/// s-t network with long double capacities; Dinic's algorithm.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes);

  int nodes() const { return static_cast<int>(head_.size()); }
  void add_arc(int from, int to, long double capacity);
  /// Adds the pair u->v and v->u with the same capacity.
  void add_edge(int u, int v, long double capacity);

  long double max_flow(int source, int sink);

  /// After max_flow: nodes reachable from the source in the residual graph
  /// (smallest minimum-cut source side).
  std::vector<bool> source_reachable(int source) const;
  /// After max_flow: nodes that cannot reach the sink in the residual graph
  /// (largest minimum-cut source side).
  std::vector<bool> cannot_reach_sink(int sink) const;

 private:
  struct Arc {
    int to;
    int next;
    long double residual;
  };

  bool levels(int source, int sink);
  long double push(int u, int sink, long double limit);
  bool open(const Arc& a) const { return a.residual > tolerance_; }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> cursor_;
  long double tolerance_ = 0.0L;
};

struct GroundState {
  SpinConfig spins;
  /// H(spins), recomputed directly from the configuration.
  double energy;
  long double cut_value;
  /// energy = cut_value - offset
  long double offset;
  /// Several minimisers exist; `spins` is the one with the most +1 sites.
  bool degenerate;
};

/// Exact minimiser of H^{bc, Lambda_N, eps h}; the temperature is ignored.
/// Ties resolve towards +1. Ising only.
GroundState solve_ground_state(const DisorderField& h, const ModelParams& p);

SpinConfig ground_state(const DisorderField& h, const ModelParams& p);

/// 1{sigma^{+,gs}_o = 1} - 1{sigma^{-,gs}_o = 1}
int t0_boundary_influence(const DisorderField& h, const ModelParams& p);

}  // namespace peierls
