#pragma once

// Animal oracle by exhaustion: every subset of the L1 ball of radius k - 1
// around o that contains o and has at most k cells, kept when connected and
// hole-free. No growth order, no shared code with the enumerator.

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "peierls/lattice.hpp"

namespace oracle {

using namespace peierls;

inline std::vector<Site> l1_ball(int d, int r) {
  std::vector<Site> out;
  const LatticeBox cube(d, r);
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const Site s = cube.site(i);
    if (s != origin() && l1_distance(s, origin(), d) <= r) out.push_back(s);
  }
  return out;
}

inline bool connected_small(int d, const std::vector<Site>& cells) {
  std::vector<bool> seen(cells.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    ++count;
    for (std::size_t v = 0; v < cells.size(); ++v) {
      if (!seen[v] && l1_distance(cells[u], cells[v], d) == 1) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return count == cells.size();
}

// Simply connected sets containing o with at most k cells; optionally only
// subsets of `box`.
inline std::set<SiteSet> animals(int d, int k, const LatticeBox* box = nullptr) {
  std::vector<Site> pool;
  for (const Site& s : l1_ball(d, k - 1))
    if (!box || box->contains(s)) pool.push_back(s);
  std::set<SiteSet> out;
  std::vector<Site> chosen{origin()};
  std::function<void(std::size_t)> choose = [&](std::size_t start) {
    if (connected_small(d, chosen)) {
      SiteSet a(d, chosen);
      if (is_simply_connected(a)) out.insert(a);
    }
    if (static_cast<int>(chosen.size()) == k) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      choose(i + 1);
      chosen.pop_back();
    }
  };
  choose(0);
  return out;
}

inline std::map<int, std::uint64_t> boundary_counts(int d, int k, int max_boundary) {
  std::map<int, std::uint64_t> counts;
  for (const SiteSet& a : animals(d, k)) {
    const int n = static_cast<int>(a.boundary_size());
    if (n <= max_boundary) ++counts[n];
  }
  return counts;
}

}  // namespace oracle
