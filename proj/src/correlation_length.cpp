#include "peierls/correlation_length.hpp"

#include <stdexcept>

#include "peierls/ground_state.hpp"
#include "peierls/parallel.hpp"

namespace peierls {

PsiScan psi_scan(const ModelParams& p, const PsiOptions& o) {
  p.validate();
  if (!p.is_ising()) throw std::invalid_argument("kind: psi scans are defined for Ising");
  if (!(o.threshold > 0.0 && o.threshold < 1.0)) throw std::invalid_argument("threshold: must lie in (0, 1)");
  if (o.replicas < 30) throw std::invalid_argument("replicas: psi scans need R >= 30");
  if (o.max_radius < 1) throw std::invalid_argument("max_radius: must be >= 1");

  PsiScan scan;
  for (int n = 1; n <= o.max_radius; n *= 2) {
    ModelParams q = p;
    q.radius = n;
    const auto values = parallel_map(static_cast<std::size_t>(o.replicas), o.workers, [&](std::size_t r) {
      const auto h = sample_field(q, o.seed + r);
      if (q.temperature == 0.0) return static_cast<double>(t0_boundary_influence(h, q));
      McmcOptions chains = o.mcmc;
      chains.seed = splitmix64(o.seed + r);
      chains.workers = 1;
      return estimate_boundary_influence(h, q, chains).value;
    });
    PsiPoint point{n, mean_estimate(values)};
    scan.curve.push_back(point);
    if (point.m.value <= o.threshold) {
      scan.psi = n;
      return scan;
    }
    scan.lower_bound = n;
  }
  return scan;
}

}  // namespace peierls
