#pragma once

// Quenched Gaussian disorder and the two symmetry maps used by the flip
// argument: sign reversal on a set (Ising) and cyclic relabelling of the
// per-state field values on a set (Potts).

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "peierls/lattice.hpp"
#include "peierls/model.hpp"

namespace peierls {

/// Standard normal deviate that is a pure function of (seed, site, state).
double keyed_normal(std::uint64_t seed, const Site& site, int state);

std::uint64_t splitmix64(std::uint64_t x);

/// Cyclic relabelling theta^j of the states 1..q, with theta(k) = k - 1 for
/// k >= 2 and theta(1) = q.
class Rotation {
 public:
  Rotation(int states, int power);

  int states() const { return states_; }
  int power() const { return power_; }

  /// theta^j(k)
  int apply(int k) const;
  /// theta^{-j}(k)
  int apply_inverse(int k) const;

  Rotation inverse() const { return Rotation(states_, states_ - power_); }

 private:
  int states_;
  int power_;
};

/// Field values over a box. Column = site index, row = state (a single row
/// for Ising). Immutable once built.
class DisorderField {
 public:
  DisorderField(LatticeBox box, ModelKind kind, Eigen::MatrixXd values, std::uint64_t seed);

  const LatticeBox& box() const { return box_; }
  ModelKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  int components() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }

  /// Ising value at a site index.
  double operator[](std::size_t site) const { return values_(0, static_cast<Eigen::Index>(site)); }
  /// Potts value h_{k, v} for state k in 1..q.
  double value(int state, std::size_t site) const {
    return values_(state - 1, static_cast<Eigen::Index>(site));
  }

  /// Copy with one entry replaced; `component` is 0 for Ising, state - 1 for Potts.
  DisorderField with_entry(int component, std::size_t site, double v) const;

  /// Copy whose values outside `sites` are kept and inside are redrawn from
  /// the keyed generator under `seed`.
  DisorderField resampled_on(const SiteSet& sites, std::uint64_t seed) const;

  friend bool operator==(const DisorderField& a, const DisorderField& b) {
    return a.box_ == b.box_ && a.kind_ == b.kind_ && a.values_ == b.values_;
  }

 private:
  LatticeBox box_;
  ModelKind kind_;
  Eigen::MatrixXd values_;
  std::uint64_t seed_;
};

/// i.i.d. standard normal field on the box of `p`; deterministic in (p, seed).
/// The value at a site does not depend on the box radius.
DisorderField sample_field(const ModelParams& p, std::uint64_t seed);

/// h^A: sign reversed on A. Rejects Potts fields.
DisorderField flip(const DisorderField& h, const SiteSet& a);

/// h^{A,j}: h^{A,j}_{k,v} = h_{theta^{-j}(k), v} for v in A. Rejects Ising fields.
DisorderField rotate_field(const DisorderField& h, const SiteSet& a, const Rotation& r);

/// sigma^A: spins negated on A.
SpinConfig flip_spins(const SpinConfig& sigma, const SiteSet& a);

/// sigma^{A,j}: theta^j applied on A.
SpinConfig rotate_spins(const SpinConfig& sigma, const SiteSet& a, const Rotation& r);

/// CSV dump: a comment header with d, N, q, seed, then one row per entry.
void write_field_csv(std::ostream& out, const DisorderField& h);
DisorderField read_field_csv(std::istream& in);

}  // namespace peierls
