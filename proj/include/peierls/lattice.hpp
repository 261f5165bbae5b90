#pragma once

// Geometry of the box Lambda_N inside Z^d: sites, boxes, finite site sets,
// edge boundaries, connectivity and hole filling.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace peierls {

inline constexpr int kMaxDimension = 4;

/// A point of Z^d. Coordinates past the active dimension stay zero.
struct Site {
  std::array<int, kMaxDimension> x{};

  constexpr int operator[](int axis) const { return x[static_cast<std::size_t>(axis)]; }
  constexpr int& operator[](int axis) { return x[static_cast<std::size_t>(axis)]; }

  friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

constexpr Site origin() { return Site{}; }

Site make_site(std::initializer_list<int> coords);

/// Neighbour of `s` one step along `axis` in direction `step` (+1 or -1).
constexpr Site shifted(Site s, int axis, int step) {
  s[axis] += step;
  return s;
}

int l1_distance(const Site& a, const Site& b, int dimension);

std::string to_string(const Site& s, int dimension);

struct SiteHash {
  std::size_t operator()(const Site& s) const noexcept;
};

/// Ordered nearest-neighbour pair (u, v) with u inside a set and v outside it.
struct Edge {
  Site inside;
  Site outside;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// The box [-N, N]^d. Sites are indexed row-major with the last axis fastest.
class LatticeBox {
 public:
  LatticeBox(int dimension, int radius);

  int dimension() const { return dimension_; }
  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  std::size_t size() const { return size_; }

  bool contains(const Site& s) const;
  std::size_t index(const Site& s) const;
  Site site(std::size_t index) const;
  std::size_t origin_index() const { return index(origin()); }

  friend bool operator==(const LatticeBox&, const LatticeBox&) = default;

 private:
  int dimension_;
  int radius_;
  std::size_t size_;
};

std::vector<Site> box_sites(const LatticeBox& box);

/// Nearest-neighbour structure of a box in site-index space.
struct BoxGraph {
  explicit BoxGraph(const LatticeBox& box);

  LatticeBox box;
  std::vector<std::vector<int>> neighbors;  // in-box neighbours
  std::vector<int> exterior_bonds;          // bonds leaving the box
  std::size_t bond_count = 0;               // unordered in-box bonds
};

/// Finite subset of Z^d with its edge boundary and connectivity flags cached
/// at construction. Sites are stored sorted and deduplicated.
class SiteSet {
 public:
  explicit SiteSet(int dimension);
  SiteSet(int dimension, std::vector<Site> sites);

  int dimension() const { return dimension_; }
  bool empty() const { return sites_.empty(); }
  std::size_t size() const { return sites_.size(); }
  bool contains(const Site& s) const { return members_.count(s) != 0; }

  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Edge>& boundary() const { return boundary_; }
  std::size_t boundary_size() const { return boundary_.size(); }
  bool connected() const { return connected_; }
  bool simply_connected() const { return simply_connected_; }

  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }

  /// One parenthesised coordinate tuple per line, sorted.
  std::string to_text() const;
  static SiteSet from_text(int dimension, std::string_view text);

  friend bool operator==(const SiteSet& a, const SiteSet& b) {
    return a.dimension_ == b.dimension_ && a.sites_ == b.sites_;
  }
  friend bool operator<(const SiteSet& a, const SiteSet& b) {
    return a.dimension_ != b.dimension_ ? a.dimension_ < b.dimension_ : a.sites_ < b.sites_;
  }

 private:
  int dimension_;
  std::vector<Site> sites_;
  std::unordered_set<Site, SiteHash> members_;
  std::vector<Edge> boundary_;
  bool connected_ = false;
  bool simply_connected_ = false;
};

std::vector<Edge> edge_boundary(const SiteSet& a);

bool is_connected(const SiteSet& a);

/// Nonempty, connected, and Z^d \ A has no finite component.
bool is_simply_connected(const SiteSet& a);

/// A together with every finite component of its complement.
/// Throws std::invalid_argument if `a` is not connected.
SiteSet fill(const SiteSet& a);

SiteSet symmetric_difference(const SiteSet& a, const SiteSet& b);
SiteSet set_union(const SiteSet& a, const SiteSet& b);

/// Sites of `a` inside `box`, as box indices.
std::vector<std::size_t> box_indices(const SiteSet& a, const LatticeBox& box);

bool is_subset(const SiteSet& a, const LatticeBox& box);

}  // namespace peierls
