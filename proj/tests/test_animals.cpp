#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles/animals_oracle.hpp"
#include "peierls/animals.hpp"
#include "peierls/exact_gibbs.hpp"

using namespace peierls;

namespace {

DisorderField field(int d, int n, std::uint64_t seed) { return sample_field(ModelParams::ising(d, n, 1.0, 1.0), seed); }

double family_max(const DisorderField& h, const std::vector<SiteSet>& family) {
  double best = -INFINITY;
  for (const auto& a : family) best = std::max(best, field_sum(h, a) / static_cast<double>(a.boundary_size()));
  return best;
}

// Every axis-aligned box inside Lambda_N containing o, listed directly.
double rectangle_max(const DisorderField& h) {
  const int n = h.box().radius();
  const int d = h.box().dimension();
  double best = -INFINITY;
  for (int x0 = -n; x0 <= 0; ++x0)
    for (int x1 = 0; x1 <= n; ++x1)
      for (int y0 = -n; y0 <= 0; ++y0)
        for (int y1 = 0; y1 <= n; ++y1)
          for (int z0 = (d == 3 ? -n : 0); z0 <= 0; ++z0)
            for (int z1 = 0; z1 <= (d == 3 ? n : 0); ++z1) {
              double sum = 0.0;
              for (int x = x0; x <= x1; ++x)
                for (int y = y0; y <= y1; ++y)
                  for (int z = z0; z <= z1; ++z)
                    sum += h[h.box().index(d == 3 ? make_site({x, y, z}) : make_site({x, y}))];
              const double a = x1 - x0 + 1;
              const double b = y1 - y0 + 1;
              const double c = z1 - z0 + 1;
              const double boundary = d == 2 ? 2 * (a + b) : 2 * (a * b + b * c + c * a);
              best = std::max(best, sum / boundary);
            }
  return best;
}

}  // namespace

TEST_CASE("small enumerations") {
  const auto one = enumerate_animals(2, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == SiteSet(2, {origin()}));
  CHECK(enumerate_animals(2, 2).size() == 5);
  CHECK(enumerate_animals(3, 2).size() == 7);
  for (const auto& a : enumerate_animals(2, 5)) {
    CHECK(a.contains(origin()));
    CHECK(a.simply_connected());
  }
  CHECK_THROWS_AS(enumerate_animals(2, 11), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_animals(3, 8), BudgetExceeded);
}

TEST_CASE("enumeration matches the subset oracle through 6 cells in d=2") {
  const auto ours = enumerate_animals(2, 6);
  const std::set<SiteSet> distinct(ours.begin(), ours.end());
  CHECK(distinct.size() == ours.size());
  const std::set<SiteSet> reference = oracle::animals(2, 6);
  CHECK(distinct == reference);
}

TEST_CASE("enumeration matches the subset oracle through 4 cells in d=3") {
  const auto ours = enumerate_animals(3, 4);
  CHECK(std::set<SiteSet>(ours.begin(), ours.end()) == oracle::animals(3, 4));
}

TEST_CASE("the 7-cell ring around a hole is excluded") {
  bool found_hole = false;
  AnimalSearch search;
  search.max_cells = 7;
  search.all_connected = true;
  std::size_t connected = 0;
  for_each_animal(search, [&](std::span<const Site> s, int) {
    ++connected;
    found_hole = found_hole || !is_simply_connected(SiteSet(2, std::vector<Site>(s.begin(), s.end())));
  });
  CHECK(found_hole);
  CHECK(enumerate_animals(2, 7).size() < connected);
}

TEST_CASE("box-restricted family matches the oracle") {
  const LatticeBox box(2, 1);
  const auto ours = enumerate_box_animals(box, 9);
  CHECK(std::set<SiteSet>(ours.begin(), ours.end()) == oracle::animals(2, 9, &box));
  for (const auto& a : ours) CHECK(is_subset(a, box));
}

TEST_CASE("counts by boundary size") {
  const auto counts = count_by_boundary(2, 8);
  CHECK(counts.at(4) == 1);
  CHECK(counts.at(6) == 4);
  CHECK(counts.at(8) == 22);
  CHECK(counts == oracle::boundary_counts(2, 4, 8));
  CHECK(count_by_boundary(2, 10) == oracle::boundary_counts(2, 6, 10));
  const auto d3 = count_by_boundary(3, 14);
  CHECK(d3.at(6) == 1);
  CHECK(d3.at(10) == 6);
  CHECK(d3.at(14) == 45);
  CHECK(d3 == oracle::boundary_counts(3, 3, 14));
}

TEST_CASE("counts stay below the closed-form bound") {
  CHECK(count_bound(1, 2) == doctest::Approx(262144.0));
  CHECK(count_bound(1, 3) == doctest::Approx(40310784.0));
  CHECK(cell_cap_for_boundary(2, 8) == 4);
  CHECK(cell_cap_for_boundary(2, 10) == 6);
  CHECK(cell_cap_for_boundary(3, 6) == 1);
  for (int d : {2, 3}) {
    for (const auto& [n, c] : count_by_boundary(d, d == 2 ? 14 : 18)) {
      CHECK(std::log(static_cast<double>(c)) <= log_count_bound(n, d));
    }
  }
}

TEST_CASE("dyadic classes") {
  CHECK(dyadic_class(4) == 2);
  CHECK(dyadic_class(7) == 2);
  CHECK(dyadic_class(8) == 3);
  CHECK(dyadic_class(15) == 3);
  CHECK(dyadic_class(16) == 4);
}

TEST_CASE("field sums") {
  const auto h = field(2, 2, 3);
  CHECK(field_sum(h, SiteSet(2)) == 0.0);
  const SiteSet a(2, {origin(), make_site({1, 0})});
  const SiteSet b(2, {make_site({0, 1}), make_site({-2, 2})});
  CHECK(field_sum(h, set_union(a, b)) == doctest::Approx(field_sum(h, a) + field_sum(h, b)));
  CHECK_THROWS_AS(field_sum(h, SiteSet(2, {make_site({5, 0})})), std::invalid_argument);

  const SiteSet five(2, {origin(), make_site({1, 0}), make_site({2, 0}), make_site({0, 1}), make_site({-1, -1})});
  const int r = 10000;
  std::vector<double> sums;
  for (int i = 0; i < r; ++i) sums.push_back(field_sum(field(2, 2, 1000 + static_cast<std::uint64_t>(i)), five));
  const double chi2 = (r - 1) * sample_variance(sums) / 5.0;
  CHECK(std::abs(chi2 - (r - 1)) <= 3.0 * std::sqrt(2.0 * (r - 1)));
}

TEST_CASE("exact mode is the family maximum and ignores enumeration order") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h1 = field(2, 1, seed);
    const AnimalSup s = greedy_animal_sup(h1, SupMode::exact);
    CHECK(s.value == doctest::Approx(family_max(h1, enumerate_box_animals(h1.box(), 9))));
    CHECK(s.argmax.simply_connected());
    CHECK(s.argmax.contains(origin()));
    SupOptions shuffled;
    shuffled.order_seed = seed + 7;
    CHECK(greedy_animal_sup(h1, SupMode::exact, shuffled).value == s.value);

    const auto h2 = field(2, 2, seed);
    SupOptions capped;
    capped.max_cells = 6;
    CHECK(greedy_animal_sup(h2, SupMode::exact, capped).value ==
          doctest::Approx(family_max(h2, enumerate_box_animals(h2.box(), 6))));
  }
}

TEST_CASE("all-negative field: the optimum is at least the singleton value") {
  auto h = field(2, 2, 5);
  Eigen::MatrixXd v = -h.values().cwiseAbs();
  const DisorderField neg(h.box(), h.kind(), v, 5);
  SupOptions o;
  o.max_cells = 6;
  const AnimalSup s = greedy_animal_sup(neg, SupMode::exact, o);
  CHECK(s.value >= neg[neg.box().origin_index()] / 4.0);
  CHECK(s.value < 0.0);
}

TEST_CASE("negating h turns the argmax into the argmin") {
  const auto h = field(2, 1, 4);
  const DisorderField neg(h.box(), h.kind(), -h.values(), 4);
  const auto family = enumerate_box_animals(h.box(), 9);
  const AnimalSup s = greedy_animal_sup(h, SupMode::exact);
  double lowest = INFINITY;
  SiteSet arg(2);
  for (const auto& a : family) {
    CHECK(field_sum(neg, a) == -field_sum(h, a));
    const double r = field_sum(neg, a) / static_cast<double>(a.boundary_size());
    if (r < lowest) {
      lowest = r;
      arg = a;
    }
  }
  CHECK(arg == s.argmax);
  CHECK(lowest == doctest::Approx(-s.value));
}

TEST_CASE("rectangles mode matches direct listing") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto [d, n] : {std::pair{2, 1}, std::pair{2, 4}, std::pair{3, 1}, std::pair{3, 2}}) {
      const auto h = field(d, n, seed);
      const AnimalSup s = greedy_animal_sup(h, SupMode::rectangles);
      CHECK(s.value == doctest::Approx(rectangle_max(h)).epsilon(1e-12));
      CHECK(s.value == doctest::Approx(s.field / s.boundary));
      CHECK(s.argmax.contains(origin()));
    }
  }
}

TEST_CASE("mode ordering: rectangles <= anneal <= exact") {
  int anneal_at_least_rect = 0;
  const int instances = 40;
  for (int i = 0; i < instances; ++i) {
    const auto h = field(2, 1 + i % 2, 300 + static_cast<std::uint64_t>(i));
    SupOptions o;
    o.max_cells = h.box().radius() == 1 ? 0 : 8;
    o.steps = 4000;
    o.seed = static_cast<std::uint64_t>(i);
    const double exact = greedy_animal_sup(h, SupMode::exact, o).value;
    const double rect = greedy_animal_sup(h, SupMode::rectangles, o).value;
    const AnimalSup ann = greedy_animal_sup(h, SupMode::anneal, o);
    CHECK(ann.argmax.simply_connected());
    CHECK(ann.value == doctest::Approx(field_sum(h, ann.argmax) / ann.argmax.boundary_size()));
    if (o.max_cells == 0) CHECK(rect <= exact + 1e-12);
    CHECK(ann.value <= exact + 1e-12);
    anneal_at_least_rect += ann.value >= rect - 1e-12;
  }
  CHECK(anneal_at_least_rect >= 0.95 * instances);
}

TEST_CASE("scaling rows are reproducible and grow in d=2") {
  const auto a = scaling_experiment({2}, {2, 16}, 20, 1);
  const auto b = scaling_experiment({2}, {2, 16}, 20, 1, SupMode::rectangles, 2);
  REQUIRE(a.size() == 2);
  CHECK(a[0].samples == b[0].samples);
  CHECK(a[1].value.value > a[0].value.value);
  for (std::size_t r = 0; r < a[0].samples.size(); ++r) CHECK(a[1].samples[r] >= a[0].samples[r]);
  const auto c = scaling_experiment({2}, {16}, 20, 1000);
  CHECK(std::abs(c[0].value.value - a[1].value.value) <= 3 * std::hypot(c[0].value.se, a[1].value.se));
}
