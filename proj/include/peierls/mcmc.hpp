#pragma once

// Single-site heat-bath dynamics for the finite-volume Gibbs measures.

#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "peierls/disorder.hpp"
#include "peierls/lattice.hpp"
#include "peierls/model.hpp"
#include "peierls/stats.hpp"

namespace peierls {

struct ChainState {
  SpinConfig spins;
  std::uint64_t sweeps = 0;
  std::mt19937_64 rng;
};

/// Chain started from the configuration equal to `initial_spin` everywhere.
ChainState start_chain(const ModelParams& p, int initial_spin, std::uint64_t seed);

/// Uniform on [0, 1) with 53 random bits; fixed across standard libraries.
double uniform01(std::mt19937_64& rng);

class HeatBath {
 public:
  /// Throws std::invalid_argument for T = 0 or a mismatched field.
  HeatBath(const ModelParams& p, const DisorderField& h);

  const ModelParams& params() const { return params_; }

  /// Conditional law of the spin at `site` given the rest, indexed by spin_row.
  Eigen::VectorXd conditional(const SpinConfig& sigma, std::size_t site) const;

  /// Resamples every site once in index order.
  void sweep(ChainState& state) const;

 private:
  double plus_probability(const SpinConfig& sigma, std::size_t site) const;

  ModelParams params_;
  DisorderField field_;
  BoxGraph graph_;
};

struct McmcOptions {
  std::uint64_t sweeps = 20000;
  /// Defaults to sweeps / 10.
  std::optional<std::uint64_t> burn_in;
  int replicas = 16;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency.
  int workers = 1;

  std::uint64_t effective_burn_in() const { return burn_in.value_or(sweeps / 10); }
};

/// mu(sigma_v = spin): mean over replicas of per-chain time averages, SE from
/// the spread of the chain means. Chains start from the boundary state.
Estimate estimate_marginal(const DisorderField& h, const ModelParams& p, const Site& v, int spin,
                           const McmcOptions& options);

/// m = mu^+(sigma_o = 1) - mu^-(sigma_o = 1) from plus and minus chains on
/// the same field; SE combines both.
Estimate estimate_boundary_influence(const DisorderField& h, const ModelParams& p, const McmcOptions& options);

}  // namespace peierls
