#pragma once

// Lattice animals through the origin: enumeration of the simply connected
// ones, counts by boundary size, and the greedy animal sup H_A / |dA|.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peierls/disorder.hpp"
#include "peierls/lattice.hpp"
#include "peierls/stats.hpp"

namespace peierls {

/// Largest cell counts enumerate_animals accepts, by dimension.
int max_enumeration_cells(int d);

inline constexpr std::uint64_t kDefaultAnimalBudget = 200'000'000;

/// Depth-first growth of connected sets containing o (each set produced
/// once), optionally restricted to a box. Visits only simply connected sets
/// unless `all_connected` is set.
struct AnimalSearch {
  int dimension = 2;
  int max_cells = 1;
  std::optional<LatticeBox> box;
  bool all_connected = false;
  /// Permutes the neighbour order; results as sets do not depend on it.
  std::uint64_t order_seed = 0;
  /// Maximum number of connected sets grown before BudgetExceeded.
  std::uint64_t budget = kDefaultAnimalBudget;
};

/// visit(cells, |dA|). The span is only valid during the call.
void for_each_animal(const AnimalSearch& search, const std::function<void(std::span<const Site>, int)>& visit);

/// All simply connected A containing o with |A| <= max_cells, sorted.
/// Throws BudgetExceeded above max_enumeration_cells(d).
std::vector<SiteSet> enumerate_animals(int d, int max_cells);

/// Family of simply connected A inside the box containing o with |A| <= max_cells.
std::vector<SiteSet> enumerate_box_animals(const LatticeBox& box, int max_cells);

/// Largest |A| compatible with |dA| = n, from |dA| >= 2d |A|^{(d-1)/d}.
int cell_cap_for_boundary(int d, int n);

/// Exact counts of simply connected A containing o, keyed by |dA| <= max_boundary.
std::map<int, std::uint64_t> count_by_boundary(int d, int max_boundary);

/// (2dn)^d (16 d^3)^{2n}
double count_bound(int n, int d);
double log_count_bound(int n, int d);

/// k with |dA| in [2^k, 2^{k+1}); sizes equal to 2^{k+1} go to class k+1.
int dyadic_class(int boundary);

/// H_A = sum of h over A (Ising fields).
double field_sum(const DisorderField& h, const SiteSet& a);

enum class SupMode { exact, rectangles, anneal };
std::string to_string(SupMode mode);
SupMode parse_sup_mode(const std::string& name);

struct SupOptions {
  /// exact: cell cap (0 = whole box). anneal: cap on |A| (0 = none).
  int max_cells = 0;
  std::uint64_t budget = kDefaultAnimalBudget;
  std::uint64_t order_seed = 0;
  // anneal
  int restarts = 4;
  int steps = 20000;
  double initial_temperature = 0.05;
  double final_temperature = 1e-4;
  std::uint64_t seed = 1;
};

struct AnimalSup {
  double value = 0.0;
  SiteSet argmax{2};
  /// H_A and |dA| of the argmax.
  double field = 0.0;
  int boundary = 0;
};

/// max over the mode's family of H_A / |dA| for the field h on its box.
/// exact: every simply connected A in the box containing o (within the cap).
/// rectangles: axis-aligned boxes containing o (d = 2, 3).
/// anneal: add/remove moves inside the family, started from the rectangle optimum.
AnimalSup greedy_animal_sup(const DisorderField& h, SupMode mode, const SupOptions& options = {});

struct ScalingRow {
  int dimension = 0;
  int radius = 0;
  SupMode mode = SupMode::rectangles;
  Estimate value;
  /// Per-replica values, index order.
  std::vector<double> samples;
};

/// E[sup H_A / |dA|] per (d, N) over replicas with seeds seed, seed + 1, ...
/// The field at a site does not depend on N, so rows for one d share their
/// disorder and increments can be compared replica by replica.
std::vector<ScalingRow> scaling_experiment(const std::vector<int>& dimensions, const std::vector<int>& radii,
                                           int replicas, std::uint64_t seed, SupMode mode = SupMode::rectangles,
                                           int workers = 1, const SupOptions& options = {});

}  // namespace peierls
