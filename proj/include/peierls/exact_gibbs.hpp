#pragma once

// Exact finite-volume Gibbs quantities by enumeration of every spin
// configuration of the box. All partition sums are carried in log domain.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "peierls/disorder.hpp"
#include "peierls/lattice.hpp"
#include "peierls/model.hpp"

namespace peierls {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 28;

/// Raised when a requested exact computation exceeds its state budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// states^sites, saturating at UINT64_MAX.
std::uint64_t configuration_count(int states, std::size_t sites);

struct GibbsSummary {
  double log_partition = 0.0;
  /// marginals(spin_row(s), v) = mu(sigma_v = s)
  Eigen::MatrixXd marginals;
};

/// An enumerable model: the box geometry plus the parameters, checked once
/// against the budget. T = 0 is rejected; use ground_state for it.
class GibbsSystem {
 public:
  explicit GibbsSystem(const ModelParams& p, std::uint64_t budget = kDefaultEnumerationBudget);

  const ModelParams& params() const { return params_; }
  const BoxGraph& graph() const { return graph_; }
  std::uint64_t configurations() const { return configurations_; }

  double energy(std::span<const std::int8_t> spins, const DisorderField& h) const;
  double log_partition(const DisorderField& h) const;
  GibbsSummary summarize(const DisorderField& h) const;

  /// Calls `visit(sigma, H(sigma))` once per configuration, in a fixed order.
  void for_each_configuration(const DisorderField& h,
                              const std::function<void(const SpinConfig&, double)>& visit) const;

 private:
  template <typename Visitor>
  void enumerate(const DisorderField& h, Visitor&& visit) const;

  void check_field(const DisorderField& h) const;

  ModelParams params_;
  BoxGraph graph_;
  std::uint64_t configurations_;
};

/// H^{bc, Lambda_N, eps h}(sigma).
double hamiltonian(const SpinConfig& sigma, const DisorderField& h, const ModelParams& p);

/// log Z.
double log_partition_function(const DisorderField& h, const ModelParams& p,
                              std::uint64_t budget = kDefaultEnumerationBudget);

/// -T log Z.
double free_energy(const DisorderField& h, const ModelParams& p, std::uint64_t budget = kDefaultEnumerationBudget);

/// mu(sigma_v = s) for each spin value, indexed by spin_row.
Eigen::VectorXd marginal(const DisorderField& h, const ModelParams& p, const Site& v,
                         std::uint64_t budget = kDefaultEnumerationBudget);

/// <sigma_v> (Ising).
double magnetization(const DisorderField& h, const ModelParams& p, const Site& v,
                     std::uint64_t budget = kDefaultEnumerationBudget);

/// m = mu^+(sigma_o = 1) - mu^-(sigma_o = 1) on the same field.
double boundary_influence(const DisorderField& h, const ModelParams& p,
                          std::uint64_t budget = kDefaultEnumerationBudget);

/// Free energy difference under the sign flip on A, with plus boundary:
/// -T log Z^+(h) + T log Z^+(h^A).
double delta_flip(const DisorderField& h, const ModelParams& p, const SiteSet& a,
                  std::uint64_t budget = kDefaultEnumerationBudget);

/// Potts analogue with boundary state 1: -T log Z^1(h) + T log Z^1(h^{A,j}).
double delta_rotation(const DisorderField& h, const ModelParams& p, const SiteSet& a, const Rotation& r,
                      std::uint64_t budget = kDefaultEnumerationBudget);

/// Sum of standard-normal log densities of every field entry.
double gaussian_log_density(const DisorderField& h);

/// log nu(h, sigma) = gaussian_log_density(h) - H(sigma)/T - log Z(h).
double log_joint_density(const DisorderField& h, const SpinConfig& sigma, const ModelParams& p,
                         double log_partition);

/// The hole-filled cluster of the origin that disagrees with the boundary:
/// Ising spin -1, Potts state 2. Empty when the origin carries another spin.
SiteSet sign_component(const SpinConfig& sigma, ModelKind kind);

/// Both sides of nu(h,sigma)/nu(h^A,sigma^A) = exp(-2|dA|/T) Z(h^A)/Z(h), in
/// log form. The left side comes from the joint density, the right side from
/// partition functions alone.
struct DensityRatio {
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  double relative_error() const;
};

/// Requires p to be Ising with plus boundary and `a` equal to the sign
/// component of `sigma`; throws std::invalid_argument otherwise.
DensityRatio joint_density_ratio(const DisorderField& h, const SpinConfig& sigma, const SiteSet& a,
                                 const ModelParams& p, std::uint64_t budget = kDefaultEnumerationBudget);

/// nu(h,sigma) / sum_{j<q} nu(h^{A,j}, sigma^{A,j}) against
/// exp(-|dA|/((q-1)T)) max_j Z(h^{A,j})/Z(h), both in log form.
struct PottsDensityBound {
  double log_lhs = 0.0;
  double log_bound = 0.0;
  bool holds(double tolerance = 1e-12) const { return log_lhs <= log_bound + tolerance; }
};

PottsDensityBound potts_joint_density_bound(const DisorderField& h, const SpinConfig& sigma, const SiteSet& a,
                                            const ModelParams& p, std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace peierls
