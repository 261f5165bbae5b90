#include "peierls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "peierls/exact_gibbs.hpp"

namespace peierls {

FlowNetwork::FlowNetwork(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

void FlowNetwork::add_arc(int from, int to, long double capacity) {
  if (capacity < 0.0L) throw std::invalid_argument("negative capacity");
  arcs_.push_back({to, head_[static_cast<std::size_t>(from)], capacity});
  head_[static_cast<std::size_t>(from)] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({from, head_[static_cast<std::size_t>(to)], 0.0L});
  head_[static_cast<std::size_t>(to)] = static_cast<int>(arcs_.size()) - 1;
}

void FlowNetwork::add_edge(int u, int v, long double capacity) {
  arcs_.push_back({v, head_[static_cast<std::size_t>(u)], capacity});
  head_[static_cast<std::size_t>(u)] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({u, head_[static_cast<std::size_t>(v)], capacity});
  head_[static_cast<std::size_t>(v)] = static_cast<int>(arcs_.size()) - 1;
}

bool FlowNetwork::levels(int source, int sink) {
  level_.assign(head_.size(), -1);
  std::queue<int> queue;
  level_[static_cast<std::size_t>(source)] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
      const Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (open(arc) && level_[static_cast<std::size_t>(arc.to)] < 0) {
        level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
        queue.push(arc.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

long double FlowNetwork::push(int u, int sink, long double limit) {
  if (u == sink) return limit;
  for (int& a = cursor_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
    Arc& arc = arcs_[static_cast<std::size_t>(a)];
    if (!open(arc) || level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
    const long double sent = push(arc.to, sink, std::min(limit, arc.residual));
    if (sent > 0.0L) {
      arc.residual -= sent;
      arcs_[static_cast<std::size_t>(a ^ 1)].residual += sent;
      return sent;
    }
  }
  return 0.0L;
}

long double FlowNetwork::max_flow(int source, int sink) {
  long double largest = 0.0L;
  for (const Arc& a : arcs_) largest = std::max(largest, a.residual);
  tolerance_ = largest * 64 * std::numeric_limits<long double>::epsilon();
  long double flow = 0.0L;
  while (levels(source, sink)) {
    cursor_ = head_;
    while (true) {
      const long double sent = push(source, sink, std::numeric_limits<long double>::infinity());
      if (!(sent > 0.0L)) break;
      flow += sent;
    }
  }
  return flow;
}

std::vector<bool> FlowNetwork::source_reachable(int source) const {
  std::vector<bool> seen(head_.size(), false);
  std::vector<int> stack{source};
  seen[static_cast<std::size_t>(source)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
      const Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (open(arc) && !seen[static_cast<std::size_t>(arc.to)]) {
        seen[static_cast<std::size_t>(arc.to)] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

std::vector<bool> FlowNetwork::cannot_reach_sink(int sink) const {
  // Walk residual arcs backwards from the sink: v reaches the sink through
  // u when the arc v->u (the partner of u->v) still has capacity.
  std::vector<bool> reaches(head_.size(), false);
  std::vector<int> stack{sink};
  reaches[static_cast<std::size_t>(sink)] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
      const Arc& back = arcs_[static_cast<std::size_t>(a ^ 1)];
      const int v = arcs_[static_cast<std::size_t>(a)].to;
      if (open(back) && !reaches[static_cast<std::size_t>(v)]) {
        reaches[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  reaches.flip();
  return reaches;
}

GroundState solve_ground_state(const DisorderField& h, const ModelParams& p) {
  if (!p.is_ising()) throw std::invalid_argument("kind: ground states are only available for Ising");
  if (p.boundary != 1 && p.boundary != -1) throw std::invalid_argument("bc: boundary spin must be +1 or -1");
  if (h.kind() != ModelKind::ising || !(h.box() == p.box())) {
    throw std::invalid_argument("field does not match the model parameters");
  }
  const BoxGraph graph(p.box());
  const int n = static_cast<int>(graph.box.size());
  const int source = n;
  const int sink = n + 1;
  FlowNetwork net(n + 2);

  // H = cut - bonds - sum |c_u|, with c_u = eps h_u + bc * (exterior bonds of u).
  long double offset = 0.0L;
  for (int u = 0; u < n; ++u) {
    const auto su = static_cast<std::size_t>(u);
    const long double c = static_cast<long double>(p.field_strength) * h[su] +
                          static_cast<long double>(p.boundary * graph.exterior_bonds[su]);
    if (c > 0.0L) net.add_arc(source, u, 2.0L * c);
    if (c < 0.0L) net.add_arc(u, sink, -2.0L * c);
    offset += std::fabs(c);
    for (int v : graph.neighbors[su]) {
      if (v > u) net.add_edge(u, v, 2.0L);
    }
  }
  offset += static_cast<long double>(graph.bond_count);

  const long double cut = net.max_flow(source, sink);
  const std::vector<bool> plus = net.cannot_reach_sink(sink);
  const std::vector<bool> minimal = net.source_reachable(source);

  SpinConfig spins(graph.box, p.boundary, 1);
  bool degenerate = false;
  for (int u = 0; u < n; ++u) {
    spins.set(static_cast<std::size_t>(u), plus[static_cast<std::size_t>(u)] ? 1 : -1);
    degenerate = degenerate || plus[static_cast<std::size_t>(u)] != minimal[static_cast<std::size_t>(u)];
  }
  const double energy = hamiltonian(spins, h, p);
  return {std::move(spins), energy, cut, offset, degenerate};
}

SpinConfig ground_state(const DisorderField& h, const ModelParams& p) { return solve_ground_state(h, p).spins; }

int t0_boundary_influence(const DisorderField& h, const ModelParams& p) {
  const std::size_t o = p.box().origin_index();
  const int plus = ground_state(h, p.with_boundary(1))[o] == 1 ? 1 : 0;
  const int minus = ground_state(h, p.with_boundary(-1))[o] == 1 ? 1 : 0;
  return plus - minus;
}

}  // namespace peierls
