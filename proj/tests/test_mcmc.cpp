#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "peierls/exact_gibbs.hpp"
#include "peierls/mcmc.hpp"

using namespace peierls;

TEST_CASE("infinite-temperature limit is uniform") {
  McmcOptions o;
  o.sweeps = 4000;
  o.replicas = 8;
  const auto p = ModelParams::ising(2, 1, 1e6, 0.0);
  const Estimate e = estimate_marginal(sample_field(p, 1), p, origin(), 1, o);
  CHECK(std::abs(e.value - 0.5) <= 3 * e.se + 1e-3);

  const auto pp = ModelParams::potts(2, 1, 1e6, 0.0, 3);
  for (int k = 1; k <= 3; ++k) {
    const Estimate ek = estimate_marginal(sample_field(pp, 1), pp, make_site({1, 0}), k, o);
    CHECK(std::abs(ek.value - 1.0 / 3.0) <= 3 * ek.se + 1e-3);
  }
}

TEST_CASE("single-site box samples the exact marginal") {
  const auto p = ModelParams::ising(2, 0, 1.3, 1.0);
  const auto h = sample_field(p, 5).with_entry(0, 0, -3.2);
  McmcOptions o;
  o.sweeps = 10000;
  o.replicas = 10;
  const Estimate e = estimate_marginal(h, p, origin(), 1, o);
  const double exact = marginal(h, p, origin())(0);
  CHECK(std::abs(e.value - exact) <= 3 * e.se);
  CHECK(e.tau_int < 1.5);
}

TEST_CASE("heat bath agrees with enumeration on N=1") {
  const auto p = ModelParams::ising(2, 1, 1.5, 0.5);
  const auto h = sample_field(p, 11);
  McmcOptions o;
  o.sweeps = 20000;
  o.replicas = 16;
  const Estimate e = estimate_marginal(h, p, origin(), 1, o);
  CHECK(std::abs(e.value - marginal(h, p, origin())(0)) <= 3 * e.se);
  CHECK(e.se <= 0.005);

  const auto pp = ModelParams::potts(2, 1, 1.0, 0.5, 3, 2);
  const auto hp = sample_field(pp, 11);
  const Eigen::VectorXd exact = marginal(hp, pp, make_site({0, 1}));
  for (int k = 1; k <= 3; ++k) {
    const Estimate ek = estimate_marginal(hp, pp, make_site({0, 1}), k, o);
    CHECK(std::abs(ek.value - exact(k - 1)) <= 3 * ek.se);
  }
}

TEST_CASE("plus boundary estimate dominates minus at eps=0") {
  const auto p = ModelParams::ising(2, 1, 2.0, 0.0);
  McmcOptions o;
  o.sweeps = 5000;
  o.replicas = 8;
  const auto h = sample_field(p, 2);
  const Estimate plus = estimate_marginal(h, p, origin(), 1, o);
  const Estimate minus = estimate_marginal(h, p.with_boundary(-1), origin(), 1, o);
  CHECK(plus.value >= minus.value);
}

TEST_CASE("doubling the replicas shrinks the SE by about 1/sqrt(2)") {
  const auto p = ModelParams::ising(2, 1, 1.5, 0.5);
  const auto h = sample_field(p, 3);
  McmcOptions o;
  o.sweeps = 1000;
  o.replicas = 200;
  const double se1 = estimate_marginal(h, p, origin(), 1, o).se;
  o.replicas = 400;
  const double se2 = estimate_marginal(h, p, origin(), 1, o).se;
  CHECK(se2 / se1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("boundary influence regimes") {
  McmcOptions o;
  o.sweeps = 4000;
  o.replicas = 8;
  const auto ordered = ModelParams::ising(2, 2, 0.5, 0.0);
  CHECK(estimate_boundary_influence(sample_field(ordered, 1), ordered, o).value >= 0.9);

  const auto strong = ModelParams::ising(2, 4, 1.0, 10.0);
  const Estimate e = estimate_boundary_influence(sample_field(strong, 1), strong, o);
  CHECK(std::abs(e.value) <= 3 * e.se + 1e-3);
}

TEST_CASE("same seed, same bits; worker count does not matter") {
  const auto p = ModelParams::ising(2, 2, 1.2, 0.7);
  const auto h = sample_field(p, 4);
  McmcOptions o;
  o.sweeps = 500;
  o.replicas = 6;
  const Estimate a = estimate_boundary_influence(h, p, o);
  o.workers = 3;
  const Estimate b = estimate_boundary_influence(h, p, o);
  CHECK(a.value == b.value);
  CHECK(a.se == b.se);
  CHECK(a.tau_int == b.tau_int);
  o.seed = 2;
  CHECK(estimate_boundary_influence(h, p, o).value != a.value);
}

TEST_CASE("conditionals satisfy detailed balance against the energy") {
  for (const auto& p : {ModelParams::ising(2, 1, 0.9, 0.8, -1), ModelParams::potts(2, 1, 0.7, 0.6, 3, 3)}) {
    const auto h = sample_field(p, 21);
    const HeatBath dynamics(p, h);
    ChainState chain = start_chain(p, p.boundary, 3);
    for (int round = 0; round < 5; ++round) {
      dynamics.sweep(chain);
      for (std::size_t u = 0; u < chain.spins.size(); ++u) {
        const Eigen::VectorXd cond = dynamics.conditional(chain.spins, u);
        CHECK(cond.sum() == doctest::Approx(1.0));
        for (int a = 0; a < p.states; ++a) {
          for (int b = 0; b < p.states; ++b) {
            SpinConfig sa = chain.spins;
            SpinConfig sb = chain.spins;
            sa.set(u, row_spin(p.kind, a));
            sb.set(u, row_spin(p.kind, b));
            const double pa = std::exp(-hamiltonian(sa, h, p) / p.temperature);
            const double pb = std::exp(-hamiltonian(sb, h, p) / p.temperature);
            CHECK(cond(b) * pa == doctest::Approx(cond(a) * pb).epsilon(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("one sweep from the exact law leaves marginals unchanged") {
  const auto p = ModelParams::ising(2, 1, 1.0, 0.7);
  const auto h = sample_field(p, 8);
  const GibbsSystem system(p);
  const double log_z = system.log_partition(h);
  std::vector<SpinConfig> configs;
  std::vector<double> cdf;
  double acc = 0.0;
  system.for_each_configuration(h, [&](const SpinConfig& s, double e) {
    configs.push_back(s);
    acc += std::exp(-e / p.temperature - log_z);
    cdf.push_back(acc);
  });
  const HeatBath dynamics(p, h);
  const double exact = marginal(h, p, origin())(0);
  std::mt19937_64 rng(99);
  const int draws = 40000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) {
    const double r = uniform01(rng) * acc;
    const auto k = static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
    ChainState chain{configs[std::min(k, configs.size() - 1)], 0, std::mt19937_64(static_cast<std::uint64_t>(i))};
    dynamics.sweep(chain);
    hits += chain.spins[p.box().origin_index()] == 1;
  }
  const Estimate freq = proportion(static_cast<std::size_t>(hits), draws);
  CHECK(std::abs(freq.value - exact) <= 3 * freq.se);
}

TEST_CASE("boundary spins never change") {
  const auto p = ModelParams::ising(2, 2, 1.0, 2.0, -1);
  const HeatBath dynamics(p, sample_field(p, 1));
  ChainState chain = start_chain(p, 1, 5);
  for (int i = 0; i < 10; ++i) dynamics.sweep(chain);
  CHECK(chain.sweeps == 10);
  CHECK(chain.spins.boundary_spin() == -1);
  CHECK(chain.spins.at(make_site({3, 0})) == -1);
}

TEST_CASE("guards") {
  const auto p = ModelParams::ising(2, 1, 0.0, 0.5);
  CHECK_THROWS_AS(HeatBath(p, sample_field(p, 1)), std::invalid_argument);
  McmcOptions o;
  o.sweeps = 10;
  o.burn_in = 10;
  const auto q = ModelParams::ising(2, 1, 1.0, 0.5);
  CHECK_THROWS_AS(estimate_marginal(sample_field(q, 1), q, origin(), 1, o), std::invalid_argument);
}

TEST_CASE("autocorrelation of white noise is about 1") {
  std::mt19937_64 rng(1);
  std::vector<double> x(20000);
  for (auto& v : x) v = uniform01(rng);
  CHECK(integrated_autocorrelation(x) == doctest::Approx(1.0).epsilon(0.15));
  std::vector<double> ar(20000);
  double y = 0.0;
  for (auto& v : ar) v = y = 0.9 * y + uniform01(rng) - 0.5;
  CHECK(integrated_autocorrelation(ar) == doctest::Approx(19.0).epsilon(0.3));
}
