#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace peierls {

struct Estimate {
  double value = 0.0;
  double se = 0.0;
  /// Integrated autocorrelation time in sweeps (1 for independent draws).
  double tau_int = 1.0;
};

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> x);
/// Mean with standard error sqrt(var / n).
Estimate mean_estimate(std::span<const double> x);
/// Binomial proportion k/n with SE sqrt(p(1-p)/n).
Estimate proportion(std::size_t hits, std::size_t n);

/// Sokal's self-consistent window estimate: tau = 1 + 2 sum_{t<=W} rho(t)
/// with the smallest W >= 5 tau.
double integrated_autocorrelation(std::span<const double> x);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic critical value c(alpha) sqrt((n + m)/(n m)); alpha in {0.1, 0.05, 0.01, 0.001}.
double ks_critical_value(std::size_t n, std::size_t m, double alpha = 0.01);

/// One-sample KS statistic against the standard normal CDF.
double ks_normal_statistic(std::vector<double> x);

}  // namespace peierls
