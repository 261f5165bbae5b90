#pragma once

// Disorder-averaged boundary influence E m as a function of N, and the
// correlation length psi: the first N on a doubling schedule where E m <= threshold.

#include <cstdint>
#include <optional>
#include <vector>

#include "peierls/mcmc.hpp"
#include "peierls/model.hpp"

namespace peierls {

struct PsiOptions {
  double threshold = 0.5;
  int replicas = 30;
  /// Largest N probed; the schedule is 1, 2, 4, ... up to this.
  int max_radius = 16;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Used when T > 0.
  McmcOptions mcmc;
};

struct PsiPoint {
  int radius = 0;
  /// E m with its standard error across disorder replicas.
  Estimate m;
};

struct PsiScan {
  std::vector<PsiPoint> curve;
  /// Set when the threshold was reached.
  std::optional<int> psi;
  /// When not reached: psi > this radius.
  int lower_bound = 0;
};

/// T = 0 uses ground states (binomial SE); T > 0 uses heat-bath estimates of m.
/// Throws std::invalid_argument for a threshold outside (0, 1) or R < 30.
PsiScan psi_scan(const ModelParams& p, const PsiOptions& options);

}  // namespace peierls
