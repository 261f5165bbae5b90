#include <cmath>

#include "doctest.h"
#include "peierls/exact_gibbs.hpp"
#include "peierls/log_sum_exp.hpp"
#include "peierls/transfer_matrix.hpp"

using namespace peierls;

TEST_CASE("strip log Z matches enumeration on N <= 1") {
  for (const auto& p : {ModelParams::ising(2, 1, 1.0, 0.7), ModelParams::ising(2, 1, 0.3, 1.2, -1),
                        ModelParams::ising(2, 0, 1.0, 0.5), ModelParams::ising(2, 1, 2.0, 0.0),
                        ModelParams::potts(2, 1, 0.8, 0.5, 3, 1), ModelParams::potts(2, 1, 1.0, 0.9, 4, 2),
                        ModelParams::potts(2, 0, 1.0, 0.0, 3)}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto h = sample_field(p, seed);
      const double exact = log_partition_function(h, p);
      CHECK(strip_partition_function(h, p, p.box().side()) == doctest::Approx(exact).epsilon(1e-10));
    }
  }
}

TEST_CASE("strip log Z matches enumeration on a 5x5 box") {
  const auto p = ModelParams::ising(2, 2, 0.9, 0.6);
  const auto h = sample_field(p, 77);
  CHECK(strip_partition_function(h, p, 5) == doctest::Approx(log_partition_function(h, p)).epsilon(1e-10));
}

TEST_CASE("low temperature does not overflow") {
  const auto p = ModelParams::ising(2, 3, 0.01, 0.5);
  const double log_z = strip_partition_function(sample_field(p, 4), p, 7);
  CHECK(std::isfinite(log_z));
  CHECK(log_z > 0.0);
}

TEST_CASE("splitting at any column gives the same log Z") {
  const auto p = ModelParams::ising(2, 3, 0.7, 0.8);
  const auto h = sample_field(p, 9);
  const StripTransfer strip(p, 7);
  const double whole = strip.log_partition(h);
  for (int c = 0; c < strip.columns(); ++c) {
    const Eigen::VectorXd joined = strip.forward(h, c) + strip.backward(h, c);
    CHECK(log_sum_exp(joined) == doctest::Approx(whole).epsilon(1e-12));
  }
  CHECK(strip.backward(h, strip.columns() - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("strip guards") {
  CHECK_THROWS_AS(StripTransfer(ModelParams::ising(2, 1, 1.0, 0.0), 5), std::invalid_argument);
  CHECK_THROWS_AS(StripTransfer(ModelParams::ising(3, 1, 1.0, 0.0), 3), std::invalid_argument);
  CHECK_THROWS_AS(StripTransfer(ModelParams::ising(2, 1, 0.0, 0.0), 3), std::invalid_argument);
  CHECK_THROWS_AS(StripTransfer(ModelParams::ising(2, 6, 1.0, 0.0), 13), BudgetExceeded);
  CHECK_THROWS_AS(StripTransfer(ModelParams::ising(2, 1, 1.0, 0.0), 3, 4), BudgetExceeded);
}
