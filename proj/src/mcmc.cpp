#include "peierls/mcmc.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "peierls/parallel.hpp"

namespace peierls {

namespace {

void check_options(const McmcOptions& o) {
  if (o.replicas < 2) throw std::invalid_argument("replicas: need at least 2 chains for a standard error");
  if (o.sweeps <= o.effective_burn_in()) throw std::invalid_argument("sweeps: must exceed the burn-in");
}

std::uint64_t chain_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0x9e3779b97f4a7c15ULL));
}

struct ChainRun {
  double mean = 0.0;
  double tau = 1.0;
};

ChainRun run_indicator(const HeatBath& dynamics, const ModelParams& p, std::size_t site, int spin,
                       std::uint64_t seed, const McmcOptions& o) {
  ChainState chain = start_chain(p, p.boundary, seed);
  const std::uint64_t burn = o.effective_burn_in();
  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(o.sweeps - burn));
  for (std::uint64_t s = 0; s < o.sweeps; ++s) {
    dynamics.sweep(chain);
    if (s >= burn) trace.push_back(chain.spins[site] == spin ? 1.0 : 0.0);
  }
  return {mean(trace), integrated_autocorrelation(trace)};
}

Estimate combine(const std::vector<ChainRun>& runs) {
  std::vector<double> means;
  double tau = 0.0;
  for (const auto& r : runs) {
    means.push_back(r.mean);
    tau += r.tau;
  }
  Estimate e = mean_estimate(means);
  e.tau_int = tau / static_cast<double>(runs.size());
  return e;
}

}  // namespace

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ChainState start_chain(const ModelParams& p, int initial_spin, std::uint64_t seed) {
  return {SpinConfig(p.box(), p.boundary, initial_spin), 0, std::mt19937_64(seed)};
}

HeatBath::HeatBath(const ModelParams& p, const DisorderField& h) : params_(p), field_(h), graph_(p.box()) {
  params_.validate();
  if (!(p.temperature > 0.0)) throw std::invalid_argument("T: heat-bath sampling needs T > 0; use gs for T = 0");
  if (!(h.box() == p.box()) || h.kind() != p.kind) throw std::invalid_argument("field does not match the model parameters");
}

Eigen::VectorXd HeatBath::conditional(const SpinConfig& sigma, std::size_t site) const {
  const auto& nbrs = graph_.neighbors[site];
  const int exterior = graph_.exterior_bonds[site];
  const double beta = 1.0 / params_.temperature;
  if (params_.is_ising()) {
    const double up = plus_probability(sigma, site);
    Eigen::VectorXd out(2);
    out << up, 1.0 - up;
    return out;
  }
  Eigen::VectorXd logw(params_.states);
  for (int k = 1; k <= params_.states; ++k) {
    double agree = k == params_.boundary ? exterior : 0.0;
    for (int v : nbrs) agree += sigma[static_cast<std::size_t>(v)] == k ? 1.0 : 0.0;
    logw(k - 1) = beta * (agree + params_.field_strength * field_.value(k, site));
  }
  const Eigen::VectorXd w = (logw.array() - logw.maxCoeff()).exp().matrix();
  return w / w.sum();
}

double HeatBath::plus_probability(const SpinConfig& sigma, std::size_t site) const {
  double local = params_.field_strength * field_[site] + graph_.exterior_bonds[site] * params_.boundary;
  for (int v : graph_.neighbors[site]) local += sigma[static_cast<std::size_t>(v)];
  return 1.0 / (1.0 + std::exp(-2.0 * local / params_.temperature));
}

void HeatBath::sweep(ChainState& state) const {
  if (params_.is_ising()) {
    for (std::size_t u = 0; u < state.spins.size(); ++u) {
      state.spins.set(u, uniform01(state.rng) < plus_probability(state.spins, u) ? 1 : -1);
    }
    ++state.sweeps;
    return;
  }
  for (std::size_t u = 0; u < state.spins.size(); ++u) {
    const Eigen::VectorXd pr = conditional(state.spins, u);
    const double r = uniform01(state.rng);
    int row = 0;
    double cumulative = pr(0);
    while (r >= cumulative && row + 1 < pr.size()) cumulative += pr(++row);
    state.spins.set(u, row_spin(params_.kind, row));
  }
  ++state.sweeps;
}

Estimate estimate_marginal(const DisorderField& h, const ModelParams& p, const Site& v, int spin,
                           const McmcOptions& o) {
  check_options(o);
  const HeatBath dynamics(p, h);
  const std::size_t site = p.box().index(v);
  const auto runs = parallel_map(static_cast<std::size_t>(o.replicas), o.workers, [&](std::size_t r) {
    return run_indicator(dynamics, p, site, spin, chain_seed(o.seed, r), o);
  });
  return combine(runs);
}

Estimate estimate_boundary_influence(const DisorderField& h, const ModelParams& p, const McmcOptions& o) {
  if (!p.is_ising()) throw std::invalid_argument("kind: boundary influence is defined for Ising");
  check_options(o);
  const HeatBath plus(p.with_boundary(1), h);
  const HeatBath minus(p.with_boundary(-1), h);
  const std::size_t o_site = p.box().origin_index();
  const auto n = static_cast<std::size_t>(o.replicas);
  const auto runs = parallel_map(2 * n, o.workers, [&](std::size_t r) {
    const bool up = r < n;
    return run_indicator(up ? plus : minus, up ? plus.params() : minus.params(), o_site, 1, chain_seed(o.seed, r), o);
  });
  const Estimate a = combine({runs.begin(), runs.begin() + static_cast<std::ptrdiff_t>(n)});
  const Estimate b = combine({runs.begin() + static_cast<std::ptrdiff_t>(n), runs.end()});
  return {a.value - b.value, std::hypot(a.se, b.se), std::max(a.tau_int, b.tau_int)};
}

}  // namespace peierls
