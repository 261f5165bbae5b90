#pragma once

// Independent reference computations for small boxes. Nothing here reuses the
// library's neighbour tables or incremental energy updates.

#include <cmath>
#include <cstdint>
#include <vector>

#include "peierls/disorder.hpp"
#include "peierls/model.hpp"

namespace oracle {

using namespace peierls;

// Energy from coordinates: each bond counted once via its positive direction;
// bonds that leave the box also counted from the negative side.
inline double energy(const SpinConfig& sigma, const DisorderField& h, const ModelParams& p) {
  const LatticeBox box = p.box();
  long double coupling = 0.0L;
  long double field = 0.0L;
  auto bond = [&](int a, int b) -> long double {
    return p.is_ising() ? static_cast<long double>(a * b) : (a == b ? 1.0L : 0.0L);
  };
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site s = box.site(i);
    const int si = sigma.at(s);
    for (int axis = 0; axis < p.dimension; ++axis) {
      const Site up = shifted(s, axis, +1);
      const Site down = shifted(s, axis, -1);
      coupling += bond(si, sigma.at(up));
      if (!box.contains(down)) coupling += bond(si, sigma.at(down));
    }
    field += p.is_ising() ? h[i] * si : h.value(si, i);
  }
  return static_cast<double>(-(coupling + static_cast<long double>(p.field_strength) * field));
}

// Configuration number k in mixed radix, least significant digit at site 0.
inline SpinConfig configuration(const ModelParams& p, std::uint64_t k) {
  const LatticeBox box = p.box();
  std::vector<std::int8_t> s(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const int digit = static_cast<int>(k % static_cast<std::uint64_t>(p.states));
    k /= static_cast<std::uint64_t>(p.states);
    s[i] = static_cast<std::int8_t>(p.is_ising() ? (digit == 0 ? 1 : -1) : digit + 1);
  }
  return SpinConfig(box, p.boundary, std::move(s));
}

inline std::uint64_t count(const ModelParams& p) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < p.box().size(); ++i) c *= static_cast<std::uint64_t>(p.states);
  return c;
}

inline double log_partition(const DisorderField& h, const ModelParams& p) {
  const std::uint64_t n = count(p);
  std::vector<double> lw(n);
  double top = -INFINITY;
  for (std::uint64_t k = 0; k < n; ++k) {
    lw[k] = -energy(configuration(p, k), h, p) / p.temperature;
    top = std::max(top, lw[k]);
  }
  long double sum = 0.0L;
  for (double x : lw) sum += std::exp(static_cast<long double>(x - top));
  return top + static_cast<double>(std::log(sum));
}

// mu(sigma_v = spin)
inline double probability(const DisorderField& h, const ModelParams& p, std::size_t v, int spin) {
  const double log_z = log_partition(h, p);
  long double mass = 0.0L;
  for (std::uint64_t k = 0; k < count(p); ++k) {
    const SpinConfig s = configuration(p, k);
    if (s[v] == spin) mass += std::exp(static_cast<long double>(-energy(s, h, p) / p.temperature - log_z));
  }
  return static_cast<double>(mass);
}

// Brute-force argmin of the energy.
inline SpinConfig argmin(const DisorderField& h, const ModelParams& p, double* best_energy = nullptr) {
  double best = INFINITY;
  std::uint64_t best_k = 0;
  for (std::uint64_t k = 0; k < count(p); ++k) {
    const double e = energy(configuration(p, k), h, p);
    if (e < best) {
      best = e;
      best_k = k;
    }
  }
  if (best_energy) *best_energy = best;
  return configuration(p, best_k);
}

// Ising argmin by Gray-code walk; fast enough for 2^25 states. Neighbour
// lists come from coordinates, field-plus-boundary terms are folded per site.
inline SpinConfig gray_argmin(const DisorderField& h, const ModelParams& p, double* best_energy = nullptr) {
  const LatticeBox box = p.box();
  const std::size_t n = box.size();
  std::vector<std::vector<int>> nb(n);
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Site s = box.site(i);
    local[i] = p.field_strength * h[i];
    for (int axis = 0; axis < p.dimension; ++axis) {
      for (int step : {-1, 1}) {
        const Site t = shifted(s, axis, step);
        if (box.contains(t)) nb[i].push_back(static_cast<int>(box.index(t)));
        else local[i] += p.boundary;
      }
    }
  }
  std::vector<int> s(n, 1);
  SpinConfig all_plus(box, p.boundary, 1);
  double e = energy(all_plus, h, p);
  double best = e;
  std::vector<int> best_s = s;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int i = __builtin_ctzll(k);
    double field = local[static_cast<std::size_t>(i)];
    for (int j : nb[static_cast<std::size_t>(i)]) field += s[static_cast<std::size_t>(j)];
    e += 2.0 * s[static_cast<std::size_t>(i)] * field;
    s[static_cast<std::size_t>(i)] = -s[static_cast<std::size_t>(i)];
    if (e < best) {
      best = e;
      best_s = s;
    }
  }
  std::vector<std::int8_t> out(best_s.begin(), best_s.end());
  SpinConfig result(box, p.boundary, std::move(out));
  if (best_energy) *best_energy = energy(result, h, p);
  return result;
}

}  // namespace oracle
