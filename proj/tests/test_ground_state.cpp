#include "doctest.h"
#include "oracles/brute_force.hpp"
#include "peierls/exact_gibbs.hpp"
#include "peierls/ground_state.hpp"

using namespace peierls;

TEST_CASE("max flow on a small network") {
  FlowNetwork net(4);
  net.add_arc(0, 1, 3.0L);
  net.add_arc(0, 2, 2.0L);
  net.add_arc(1, 2, 1.0L);
  net.add_arc(1, 3, 2.0L);
  net.add_arc(2, 3, 3.0L);
  CHECK(static_cast<double>(net.max_flow(0, 3)) == doctest::Approx(5.0));
  const auto side = net.source_reachable(0);
  CHECK(side[0]);
  CHECK_FALSE(side[3]);
  CHECK_THROWS_AS(net.add_arc(0, 1, -1.0L), std::invalid_argument);
}

TEST_CASE("single-site examples") {
  const auto p = ModelParams::ising(2, 0, 0.0, 1.0);
  const auto h = sample_field(p, 1).with_entry(0, 0, -5.0);
  CHECK(ground_state(h, p)[0] == -1);
  CHECK(t0_boundary_influence(sample_field(p, 1).with_entry(0, 0, -10.0), p) == 0);
  CHECK(t0_boundary_influence(sample_field(p, 1).with_entry(0, 0, -3.0), p) == 1);
}

TEST_CASE("eps = 0 gives the boundary state") {
  for (int bc : {1, -1}) {
    const auto p = ModelParams::ising(3, 2, 0.0, 0.0, bc);
    const GroundState gs = solve_ground_state(sample_field(p, 3), p);
    CHECK(gs.spins == SpinConfig(p.box(), bc, bc));
    CHECK_FALSE(gs.degenerate);
    CHECK(t0_boundary_influence(sample_field(p, 3), p) == 1);
  }
}

TEST_CASE("cut value plus offset is the energy") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = ModelParams::ising(2 + static_cast<int>(seed % 2), 3, 0.0, 0.4 + 0.2 * static_cast<double>(seed % 5),
                                      seed % 3 == 0 ? -1 : 1);
    const auto h = sample_field(p, seed);
    const GroundState gs = solve_ground_state(h, p);
    CHECK(static_cast<double>(gs.cut_value - gs.offset) == doctest::Approx(gs.energy).epsilon(1e-12));
    CHECK(gs.energy == hamiltonian(gs.spins, h, p));
  }
}

TEST_CASE("min cut equals exhaustive argmin on d=2, N=1") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (int bc : {1, -1}) {
      const auto p = ModelParams::ising(2, 1, 0.0, seed % 2 ? 1.0 : 0.25, bc);
      const auto h = sample_field(p, seed);
      double best = 0.0;
      const SpinConfig expected = oracle::argmin(h, p, &best);
      const GroundState gs = solve_ground_state(h, p);
      CHECK(gs.spins == expected);
      CHECK(gs.energy == doctest::Approx(best).epsilon(1e-12));
      double gray = 0.0;
      CHECK(oracle::gray_argmin(h, p, &gray) == expected);
    }
  }
}

TEST_CASE("min cut equals exhaustive argmin on d=2, N=2") {
  for (std::uint64_t seed = 100; seed < 103; ++seed) {
    const auto p = ModelParams::ising(2, 2, 0.0, 1.0);
    const auto h = sample_field(p, seed);
    double best = 0.0;
    const SpinConfig expected = oracle::gray_argmin(h, p, &best);
    CHECK(ground_state(h, p) == expected);
  }
}

TEST_CASE("plus ground state dominates minus ground state") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto p = ModelParams::ising(2 + static_cast<int>(seed % 2), 4, 0.0, 0.5 + 0.1 * static_cast<double>(seed % 10));
    const auto h = sample_field(p, seed);
    const SpinConfig plus = ground_state(h, p.with_boundary(1));
    const SpinConfig minus = ground_state(h, p.with_boundary(-1));
    for (std::size_t i = 0; i < plus.size(); ++i) CHECK(plus[i] >= minus[i]);
    const int m = t0_boundary_influence(h, p);
    CHECK((m == 0 || m == 1));
  }
}

TEST_CASE("negating h and the boundary flips the ground state") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = ModelParams::ising(2, 3, 0.0, 1.3);
    const auto h = sample_field(p, seed);
    const DisorderField negated(h.box(), h.kind(), -h.values(), h.seed());
    const SpinConfig a = ground_state(h, p);
    const SpinConfig b = ground_state(negated, p.with_boundary(-1));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == -b[i]);
  }
}

TEST_CASE("exact tie is detected and resolved towards plus") {
  // Single site with eps h = -4 exactly balances the four plus-boundary bonds.
  const auto p = ModelParams::ising(2, 0, 0.0, 1.0);
  const GroundState gs = solve_ground_state(sample_field(p, 1).with_entry(0, 0, -4.0), p);
  CHECK(gs.degenerate);
  CHECK(gs.spins[0] == 1);
}

TEST_CASE("guards") {
  const auto pp = ModelParams::potts(2, 1, 0.0, 1.0, 3);
  CHECK_THROWS_AS(ground_state(sample_field(pp, 1), pp), std::invalid_argument);
}
