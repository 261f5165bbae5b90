#include <algorithm>
#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "peierls/lattice.hpp"

using namespace peierls;

namespace {

SiteSet ring2d() {
  std::vector<Site> s;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      if (x != 0 || y != 0) s.push_back(make_site({x, y}));
  return SiteSet(2, s);
}

// Random connected set grown from the origin by attaching neighbours.
SiteSet random_connected(int d, int cells, std::mt19937_64& rng) {
  std::vector<Site> sites{origin()};
  std::unordered_set<Site, SiteHash> members{origin()};
  while (static_cast<int>(sites.size()) < cells) {
    const Site base = sites[rng() % sites.size()];
    const Site next = shifted(base, static_cast<int>(rng() % static_cast<unsigned>(d)), (rng() & 1) ? 1 : -1);
    if (members.insert(next).second) sites.push_back(next);
  }
  return SiteSet(d, sites);
}

}  // namespace

TEST_CASE("box_sites counts and ranges") {
  CHECK(box_sites(LatticeBox(2, 1)).size() == 9);
  CHECK(box_sites(LatticeBox(3, 1)).size() == 27);
  const auto single = box_sites(LatticeBox(2, 0));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == origin());

  const LatticeBox box(3, 2);
  const auto sites = box_sites(box);
  CHECK(sites.size() == 125);
  std::set<Site> distinct(sites.begin(), sites.end());
  CHECK(distinct.size() == sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    CHECK(box.index(sites[i]) == i);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(sites[i][a]) <= 2);
  }
  CHECK_THROWS_AS(LatticeBox(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(LatticeBox(2, -1), std::invalid_argument);
}

TEST_CASE("box graph adjacency is symmetric with 2d neighbours in Z^d") {
  const BoxGraph g(LatticeBox(3, 1));
  for (std::size_t u = 0; u < g.neighbors.size(); ++u) {
    CHECK(g.neighbors[u].size() + static_cast<std::size_t>(g.exterior_bonds[u]) == 6);
    for (int v : g.neighbors[u]) {
      const auto& back = g.neighbors[static_cast<std::size_t>(v)];
      CHECK(std::find(back.begin(), back.end(), static_cast<int>(u)) != back.end());
    }
  }
  CHECK(g.bond_count == 54);
}

TEST_CASE("edge boundary examples") {
  CHECK(SiteSet(2, {origin()}).boundary_size() == 4);
  CHECK(SiteSet(2, {origin(), make_site({1, 0})}).boundary_size() == 6);
  CHECK(SiteSet(2).boundary_size() == 0);
  for (int d : {2, 3, 4}) CHECK(SiteSet(d, {origin()}).boundary_size() == static_cast<std::size_t>(2 * d));

  const SiteSet a(2, {origin(), make_site({1, 0})});
  for (const Edge& e : edge_boundary(a)) {
    CHECK(a.contains(e.inside));
    CHECK_FALSE(a.contains(e.outside));
    CHECK(l1_distance(e.inside, e.outside, 2) == 1);
  }
}

TEST_CASE("simple connectivity examples") {
  CHECK(is_simply_connected(SiteSet(2, {origin()})));
  CHECK_FALSE(is_simply_connected(ring2d()));
  CHECK(is_connected(ring2d()));
  CHECK_FALSE(is_simply_connected(SiteSet(2, {origin(), make_site({2, 0})})));
  CHECK_FALSE(is_simply_connected(SiteSet(2)));
}

TEST_CASE("a 3d shell has a hole; a 2d ring in 3d does not") {
  std::vector<Site> shell;
  std::vector<Site> ring;
  for (int x = -1; x <= 1; ++x)
    for (int y = -1; y <= 1; ++y)
      for (int z = -1; z <= 1; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        shell.push_back(make_site({x, y, z}));
        if (z == 0) ring.push_back(make_site({x, y, z}));
      }
  CHECK_FALSE(is_simply_connected(SiteSet(3, shell)));
  CHECK(fill(SiteSet(3, shell)).size() == 27);
  CHECK(is_simply_connected(SiteSet(3, ring)));
}

TEST_CASE("fill examples") {
  const SiteSet filled = fill(ring2d());
  CHECK(filled.size() == 9);
  CHECK(filled.contains(origin()));
  CHECK(is_simply_connected(filled));
  CHECK(fill(SiteSet(2, {origin()})) == SiteSet(2, {origin()}));
  CHECK_THROWS_AS(fill(SiteSet(2, {origin(), make_site({2, 0})})), std::invalid_argument);
}

TEST_CASE("symmetric difference examples") {
  const SiteSet a(2, {origin(), make_site({1, 0})});
  const SiteSet b(2, {make_site({1, 0}), make_site({2, 0})});
  CHECK(symmetric_difference(a, a).empty());
  CHECK(symmetric_difference(SiteSet(2, {origin()}), SiteSet(2)) == SiteSet(2, {origin()}));
  CHECK(symmetric_difference(a, b) == SiteSet(2, {origin(), make_site({2, 0})}));
}

TEST_CASE("property: d=2 boundaries are even; fill is idempotent and hole-free") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 400; ++trial) {
    const int d = 2 + trial % 2;
    const int cells = 1 + static_cast<int>(rng() % 40);
    const SiteSet a = random_connected(d, cells, rng);
    if (d == 2) CHECK(a.boundary_size() % 2 == 0);
    CHECK(a.boundary_size() >= static_cast<std::size_t>(2 * d));
    const SiteSet f = fill(a);
    CHECK(f.simply_connected());
    CHECK(fill(f) == f);
    CHECK(f.size() >= a.size());
    for (const Site& s : a) CHECK(f.contains(s));
  }
}

TEST_CASE("property: arbitrary finite subsets of the plane have even boundary") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Site> sites;
    const int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) sites.push_back(make_site({static_cast<int>(rng() % 9) - 4, static_cast<int>(rng() % 9) - 4}));
    CHECK(SiteSet(2, sites).boundary_size() % 2 == 0);
  }
}

TEST_CASE("text serialisation round trip") {
  const SiteSet a(3, {make_site({0, 0, 0}), make_site({-1, 2, 0}), make_site({1, 0, -3})});
  const std::string text = a.to_text();
  CHECK(text == "(-1,2,0)\n(0,0,0)\n(1,0,-3)\n");
  CHECK(SiteSet::from_text(3, text) == a);
  CHECK_THROWS_AS(SiteSet::from_text(2, "(1,2,3)\n"), std::invalid_argument);
}
