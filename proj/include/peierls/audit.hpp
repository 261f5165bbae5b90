#pragma once

// Numerical checks of the flip argument: tails of the free energy
// difference, its gradient, the event that every flip is cheap, the contour
// series, the Gaussian comparison, and the inequality chain for the origin.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peierls/animals.hpp"
#include "peierls/disorder.hpp"
#include "peierls/exact_gibbs.hpp"
#include "peierls/model.hpp"
#include "peierls/stats.hpp"

namespace peierls {

struct TailRow {
  double lambda = 0.0;
  /// Empirical P(|X| >= lambda) and its binomial SE.
  Estimate tail;
  double bound = 0.0;
  /// bound - tail
  double margin = 0.0;
  bool pass = false;
};

struct TailReport {
  std::string statistic;
  int set_size = 0;
  std::size_t replicas = 0;
  std::vector<TailRow> rows;
  /// Sample mean of the statistic and whether |mean| <= 3 SE.
  Estimate mean;
  bool mean_pass = false;
  bool pass() const;
};

/// 2 exp(-lambda^2 / (8 eps^2 m)) for Ising, with m -> q m for Potts.
double delta_tail_bound(double lambda, double eps, int set_size, const ModelParams& p);

struct TailOptions {
  std::size_t replicas = 100000;
  std::vector<double> lambdas{0.25, 0.5, 1.0};
  std::uint64_t seed = 1;
  /// Rotation power for Potts.
  int rotation = 1;
  int workers = 1;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

/// Delta_A with the field outside A frozen at sample_field(p, seed) and the
/// entries on A redrawn per replica. Delta_{A,j} for Potts.
TailReport concentration_check(const ModelParams& p, const SiteSet& a, const TailOptions& options);

struct TwoPointReport {
  TailReport tails;
  /// KS between Delta_A - Delta_A' and Delta_{A xor A'}, independent draws.
  double ks = 0.0;
  double ks_critical = 0.0;
  bool ks_pass = false;
  bool pass() const { return tails.pass() && ks_pass; }
};

/// Fields outside A u A' frozen; Ising only.
TwoPointReport two_point_check(const ModelParams& p, const SiteSet& a, const SiteSet& b, const TailOptions& options);

struct GradientRow {
  Site site;
  /// Ising: 1. Potts: the state whose field entry is varied.
  int state = 1;
  double finite_difference = 0.0;
  double analytic = 0.0;
  bool match = false;
  bool bounded = false;
};

struct GradientReport {
  double step = 1e-4;
  double tolerance = 1e-6;
  std::vector<GradientRow> rows;
  bool pass() const;
};

/// Central differences of Delta_A in every field entry on A against
///   Ising: -eps (<sigma_v>_h + <sigma_v>_{h^A})
///   Potts: eps (mu_{h^{A,j}}(sigma_v = theta^j(i)) - mu_h(sigma_v = i))
GradientReport lipschitz_check(const ModelParams& p, const SiteSet& a, const DisorderField& h, int rotation = 1,
                               double step = 1e-4, double tolerance = 1e-6);

struct EventRow {
  double eps = 0.0;
  /// P(sup_A Delta_A / |dA| > threshold)
  Estimate violation;
};

struct EventReport {
  double threshold = 0.0;
  std::size_t family_size = 0;
  std::vector<EventRow> rows;
};

/// Family: every simply connected A in the box containing o. Threshold 1
/// (Ising) or 1/(2q) (Potts, sup also over rotations j = 1..q-1).
EventReport event_E_probe(const ModelParams& p, const std::vector<double>& eps_values, std::size_t replicas,
                          std::uint64_t seed, int workers = 1);

struct PeierlsSum {
  bool diverges = false;
  double value = 0.0;
  double log_value = 0.0;
  /// Certified bound on the discarded tail.
  double tail_bound = 0.0;
  int terms = 0;
  /// Stopped at kMaxSeriesTerms before the terms fell below the cutoff.
  bool capped = false;
  double critical_temperature = 0.0;
};

inline constexpr int kMaxSeriesTerms = 1'000'000;

/// 1 / (2 ln(16 d^3))
double peierls_critical_temperature(int d);

/// sum_{n>=1} (2dn)^d (16 d^3)^{2n} e^{-n/T}
PeierlsSum peierls_sum(double temperature, int d, double cutoff = 1e-18);

struct ComparisonReport {
  Estimate sup_delta;
  /// 2 eps E sup H_A
  Estimate sup_field;
  double ratio = 0.0;
  double ratio_se = 0.0;
  bool degenerate = false;
  std::size_t family_size = 0;
};

struct ComparisonOptions {
  std::size_t replicas = 10000;
  /// Restrict to |dA| in dyadic class k.
  std::optional<int> dyadic_class;
  int max_cells = 0;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Explicit family (overrides the box family).
  std::optional<std::vector<SiteSet>> family;
};

/// E sup_A Delta_A against 2 eps E sup_A H_A over the same family. Fields
/// are resampled inside Lambda_{min(N, 2^{k+1})} only.
ComparisonReport talagrand_comparison(const ModelParams& p, const ComparisonOptions& options);

struct ChainReplica {
  std::uint64_t seed = 0;
  /// mu^+(sigma_o = -1)
  double origin_minus = 0.0;
  /// sum over A of mu^+({sigma : A_sigma = A})
  double fiber_sum = 0.0;
  /// sum over A of exp(-2|dA|/T) Z(h^A)/Z(h)
  double ratio_sum = 0.0;
  /// sum over A of exp(-|dA|/T), compared only when every A is cheap
  double contour_sum = 0.0;
  bool on_event = false;
  /// Largest relative error of the per-configuration density identity.
  double identity_error = 0.0;
  int violations = 0;
};

struct ChainAudit {
  double temperature = 0.0;
  double eps = 0.0;
  std::size_t family_size = 0;
  PeierlsSum series;
  std::vector<ChainReplica> replicas;
  int violations = 0;
};

/// Ising, plus boundary. Violations count failed "<=" steps (relative slack
/// 1e-12) and density identities off by more than 1e-9.
ChainAudit peierls_chain_audit(const ModelParams& p, std::size_t replicas, std::uint64_t seed, int workers = 1);

struct PottsChainAudit {
  std::size_t configurations = 0;
  int identity_failures = 0;
  int bound_failures = 0;
  std::size_t replicas = 0;
  int violations() const { return identity_failures + bound_failures; }
};

/// Potts, boundary state 1: for every sigma with sigma_o = 2 and A its sign
/// component, sum_{j<q} sum_{(u,v) in dA} 1{theta^j(sigma_u) = sigma_v} = |dA|,
/// and the joint-density bound holds.
PottsChainAudit potts_chain_audit(const ModelParams& p, std::size_t replicas, std::uint64_t seed);

}  // namespace peierls
