#include "peierls/exact_gibbs.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "peierls/log_sum_exp.hpp"

namespace peierls {

namespace {

// Recompute the energy from scratch this often to stop incremental drift.
constexpr std::uint64_t kRefreshPeriod = std::uint64_t{1} << 12;

void require_positive_temperature(const ModelParams& p) {
  if (!(p.temperature > 0.0)) {
    throw std::invalid_argument("T: Gibbs computations need T > 0; use the ground-state solver at T = 0");
  }
}

double evaluate_energy(const BoxGraph& graph, const ModelParams& p, std::span<const std::int8_t> s,
                       const DisorderField& h) {
  double coupling = 0.0;
  double field = 0.0;
  for (std::size_t u = 0; u < s.size(); ++u) {
    for (int v : graph.neighbors[u]) {
      if (static_cast<std::size_t>(v) < u) continue;
      coupling += p.is_ising() ? s[u] * s[v] : (s[u] == s[v] ? 1.0 : 0.0);
    }
    if (p.is_ising()) {
      coupling += p.boundary * s[u] * graph.exterior_bonds[u];
      field += h[u] * s[u];
    } else {
      coupling += (s[u] == p.boundary ? 1.0 : 0.0) * graph.exterior_bonds[u];
      field += h.value(s[u], u);
    }
  }
  return -(coupling + p.field_strength * field);
}

}  // namespace

std::uint64_t configuration_count(int states, std::size_t sites) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < sites; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(states)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= static_cast<std::uint64_t>(states);
  }
  return count;
}

GibbsSystem::GibbsSystem(const ModelParams& p, std::uint64_t budget)
    : params_(p), graph_(p.box()), configurations_(configuration_count(p.states, p.box().size())) {
  params_.validate();
  require_positive_temperature(params_);
  if (configurations_ > budget) {
    throw BudgetExceeded("exact enumeration needs " + std::to_string(p.states) + "^" +
                         std::to_string(graph_.box.size()) + " states, over the budget of " + std::to_string(budget));
  }
}

void GibbsSystem::check_field(const DisorderField& h) const {
  if (h.kind() != params_.kind || !(h.box() == graph_.box) || h.components() != params_.field_components()) {
    throw std::invalid_argument("field does not match the model parameters");
  }
}

double GibbsSystem::energy(std::span<const std::int8_t> s, const DisorderField& h) const {
  return evaluate_energy(graph_, params_, s, h);
}

template <typename Visitor>
void GibbsSystem::enumerate(const DisorderField& h, Visitor&& visit) const {
  check_field(h);
  const std::size_t n = graph_.box.size();
  const double eps = params_.field_strength;
  const int bc = params_.boundary;
  SpinConfig sigma(graph_.box, bc, 1);
  auto spins = sigma.mutable_spins();
  double e = energy(spins, h);
  visit(sigma, e);

  if (params_.is_ising()) {
    for (std::uint64_t k = 1; k < configurations_; ++k) {
      const auto i = static_cast<std::size_t>(std::countr_zero(k));
      double local = bc * graph_.exterior_bonds[i] + eps * h[i];
      for (int j : graph_.neighbors[i]) local += spins[static_cast<std::size_t>(j)];
      e += 2.0 * spins[i] * local;
      spins[i] = static_cast<std::int8_t>(-spins[i]);
      if (k % kRefreshPeriod == 0) e = energy(spins, h);
      visit(sigma, e);
    }
    return;
  }

  const int q = params_.states;
  auto change = [&](std::size_t i, int to) {
    const int from = spins[i];
    double gain = 0.0;
    for (int j : graph_.neighbors[i]) {
      const int sj = spins[static_cast<std::size_t>(j)];
      gain += (sj == to) - (sj == from);
    }
    gain += graph_.exterior_bonds[i] * ((to == bc) - (from == bc));
    gain += eps * (h.value(to, i) - h.value(from, i));
    e -= gain;
    spins[i] = static_cast<std::int8_t>(to);
  };
  for (std::uint64_t k = 1; k < configurations_; ++k) {
    std::size_t i = 0;
    while (i < n && spins[i] == q) {
      change(i, 1);
      ++i;
    }
    change(i, spins[i] + 1);
    if (k % kRefreshPeriod == 0) e = energy(spins, h);
    visit(sigma, e);
  }
}

double GibbsSystem::log_partition(const DisorderField& h) const {
  const double beta = 1.0 / params_.temperature;
  LogSumExp<double> acc;
  enumerate(h, [&](const SpinConfig&, double e) { acc.add(-beta * e); });
  return acc.value();
}

GibbsSummary GibbsSystem::summarize(const DisorderField& h) const {
  const double beta = 1.0 / params_.temperature;
  const std::size_t n = graph_.box.size();
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(params_.states, static_cast<Eigen::Index>(n));
  double shift = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  enumerate(h, [&](const SpinConfig& sigma, double e) {
    const double lw = -beta * e;
    if (lw > shift) {
      const double scale = std::exp(shift - lw);
      total *= scale;
      weights *= scale;
      shift = lw;
    }
    const double w = std::exp(lw - shift);
    total += w;
    for (std::size_t v = 0; v < n; ++v) weights(spin_row(params_.kind, sigma[v]), static_cast<Eigen::Index>(v)) += w;
  });
  return {shift + std::log(total), weights / total};
}

void GibbsSystem::for_each_configuration(const DisorderField& h,
                                         const std::function<void(const SpinConfig&, double)>& visit) const {
  enumerate(h, visit);
}

double hamiltonian(const SpinConfig& sigma, const DisorderField& h, const ModelParams& p) {
  p.validate();
  if (!(sigma.box() == p.box()) || h.kind() != p.kind || !(h.box() == p.box())) {
    throw std::invalid_argument("hamiltonian: configuration, field and parameters disagree");
  }
  if (sigma.boundary_spin() != p.boundary) throw std::invalid_argument("hamiltonian: boundary spin mismatch");
  return evaluate_energy(BoxGraph(p.box()), p, sigma.spins(), h);
}

double log_partition_function(const DisorderField& h, const ModelParams& p, std::uint64_t budget) {
  return GibbsSystem(p, budget).log_partition(h);
}

double free_energy(const DisorderField& h, const ModelParams& p, std::uint64_t budget) {
  return -p.temperature * log_partition_function(h, p, budget);
}

Eigen::VectorXd marginal(const DisorderField& h, const ModelParams& p, const Site& v, std::uint64_t budget) {
  const LatticeBox box = p.box();
  if (!box.contains(v)) throw std::invalid_argument("marginal: site outside the box");
  return GibbsSystem(p, budget).summarize(h).marginals.col(static_cast<Eigen::Index>(box.index(v)));
}

double magnetization(const DisorderField& h, const ModelParams& p, const Site& v, std::uint64_t budget) {
  if (!p.is_ising()) throw std::invalid_argument("magnetization: Ising only");
  const Eigen::VectorXd m = marginal(h, p, v, budget);
  return m(0) - m(1);
}

double boundary_influence(const DisorderField& h, const ModelParams& p, std::uint64_t budget) {
  if (!p.is_ising()) throw std::invalid_argument("boundary_influence: Ising only");
  const auto o = static_cast<Eigen::Index>(p.box().origin_index());
  const double plus = GibbsSystem(p.with_boundary(1), budget).summarize(h).marginals(0, o);
  const double minus = GibbsSystem(p.with_boundary(-1), budget).summarize(h).marginals(0, o);
  return plus - minus;
}

double delta_flip(const DisorderField& h, const ModelParams& p, const SiteSet& a, std::uint64_t budget) {
  if (!p.is_ising()) throw std::invalid_argument("delta_flip: Ising only");
  const GibbsSystem system(p.with_boundary(1), budget);
  return p.temperature * (system.log_partition(flip(h, a)) - system.log_partition(h));
}

double delta_rotation(const DisorderField& h, const ModelParams& p, const SiteSet& a, const Rotation& r,
                      std::uint64_t budget) {
  if (!p.is_potts()) throw std::invalid_argument("delta_rotation: Potts only");
  const GibbsSystem system(p.with_boundary(1), budget);
  return p.temperature * (system.log_partition(rotate_field(h, a, r)) - system.log_partition(h));
}

double gaussian_log_density(const DisorderField& h) {
  const double norm = 0.5 * std::log(2.0 * std::numbers::pi);
  return -0.5 * h.values().squaredNorm() - norm * static_cast<double>(h.values().size());
}

double log_joint_density(const DisorderField& h, const SpinConfig& sigma, const ModelParams& p,
                         double log_partition) {
  return gaussian_log_density(h) - hamiltonian(sigma, h, p) / p.temperature - log_partition;
}

SiteSet sign_component(const SpinConfig& sigma, ModelKind kind) {
  const LatticeBox& box = sigma.box();
  const int d = box.dimension();
  const int target = kind == ModelKind::ising ? -1 : 2;
  const std::size_t o = box.origin_index();
  if (sigma[o] != target) return SiteSet(d);
  // Sites outside the box never join the cluster.
  std::vector<char> seen(box.size(), 0);
  std::vector<std::size_t> stack{o};
  seen[o] = 1;
  std::vector<Site> cluster;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    const Site su = box.site(u);
    cluster.push_back(su);
    for (int axis = 0; axis < d; ++axis) {
      for (int step : {-1, 1}) {
        const Site sv = shifted(su, axis, step);
        if (!box.contains(sv)) continue;
        const std::size_t v = box.index(sv);
        if (!seen[v] && sigma[v] == target) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return fill(SiteSet(d, std::move(cluster)));
}

double DensityRatio::relative_error() const { return std::abs(std::expm1(log_lhs - log_rhs)); }

DensityRatio joint_density_ratio(const DisorderField& h, const SpinConfig& sigma, const SiteSet& a,
                                 const ModelParams& p, std::uint64_t budget) {
  if (!p.is_ising() || p.boundary != 1) throw std::invalid_argument("joint_density_ratio: needs Ising, plus boundary");
  if (!(sign_component(sigma, p.kind) == a)) {
    throw std::invalid_argument("joint_density_ratio: A is not the sign component of sigma");
  }
  const GibbsSystem system(p, budget);
  const DisorderField flipped = flip(h, a);
  const double log_z = system.log_partition(h);
  const double log_z_flipped = system.log_partition(flipped);

  DensityRatio out;
  out.log_lhs = log_joint_density(h, sigma, p, log_z) - log_joint_density(flipped, flip_spins(sigma, a), p, log_z_flipped);
  out.log_rhs = -2.0 * static_cast<double>(a.boundary_size()) / p.temperature + log_z_flipped - log_z;
  return out;
}

PottsDensityBound potts_joint_density_bound(const DisorderField& h, const SpinConfig& sigma, const SiteSet& a,
                                            const ModelParams& p, std::uint64_t budget) {
  if (!p.is_potts() || p.boundary != 1) throw std::invalid_argument("potts_joint_density_bound: needs Potts, boundary 1");
  if (!(sign_component(sigma, p.kind) == a)) {
    throw std::invalid_argument("potts_joint_density_bound: A is not the sign component of sigma");
  }
  const GibbsSystem system(p, budget);
  const double log_z = system.log_partition(h);
  LogSumExp<double> rotated_mass;
  double max_ratio = -std::numeric_limits<double>::infinity();
  for (int j = 1; j < p.states; ++j) {
    const Rotation r(p.states, j);
    const DisorderField hj = rotate_field(h, a, r);
    const double log_zj = system.log_partition(hj);
    rotated_mass.add(log_joint_density(hj, rotate_spins(sigma, a, r), p, log_zj));
    max_ratio = std::max(max_ratio, log_zj - log_z);
  }
  PottsDensityBound out;
  out.log_lhs = log_joint_density(h, sigma, p, log_z) - rotated_mass.value();
  out.log_bound = -static_cast<double>(a.boundary_size()) / ((p.states - 1) * p.temperature) + max_ratio;
  return out;
}

}  // namespace peierls
