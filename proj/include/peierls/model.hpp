#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "peierls/lattice.hpp"

namespace peierls {

enum class ModelKind { ising, potts };

std::string to_string(ModelKind kind);

/// Everything a finite-volume random-field measure depends on.
///
/// Ising spins are -1/+1 and `boundary` is -1 or +1. Potts spins are the
/// states 1..q and `boundary` names the state imposed outside the box.
struct ModelParams {
  int dimension = 2;
  int radius = 1;
  double temperature = 1.0;
  double field_strength = 0.0;
  ModelKind kind = ModelKind::ising;
  int states = 2;
  int boundary = 1;

  static ModelParams ising(int dimension, int radius, double temperature, double field_strength, int boundary = 1);
  static ModelParams potts(int dimension, int radius, double temperature, double field_strength, int states,
                           int boundary = 1);

  LatticeBox box() const { return LatticeBox(dimension, radius); }
  bool is_ising() const { return kind == ModelKind::ising; }
  bool is_potts() const { return kind == ModelKind::potts; }

  /// Field values stored per site: 1 for Ising, q for Potts.
  int field_components() const { return is_ising() ? 1 : states; }

  ModelParams with_boundary(int b) const;
  ModelParams with_field_strength(double eps) const;
  ModelParams with_temperature(double t) const;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Row of a marginal table for a spin value: Ising +1 -> 0, -1 -> 1;
/// Potts state k -> k - 1.
int spin_row(ModelKind kind, int spin);
int row_spin(ModelKind kind, int row);

/// Spin assignment on a box. Sites outside the box carry `boundary_spin`.
class SpinConfig {
 public:
  SpinConfig(LatticeBox box, int boundary_spin, int initial_spin);
  SpinConfig(LatticeBox box, int boundary_spin, std::vector<std::int8_t> spins);

  /// Every site set to the boundary spin.
  static SpinConfig uniform(const ModelParams& p);

  const LatticeBox& box() const { return box_; }
  int boundary_spin() const { return boundary_spin_; }
  std::size_t size() const { return spins_.size(); }

  int operator[](std::size_t index) const { return spins_[index]; }
  void set(std::size_t index, int spin) { spins_[index] = static_cast<std::int8_t>(spin); }

  /// Spin at any site of Z^d, applying the boundary convention outside the box.
  int at(const Site& s) const;

  std::span<const std::int8_t> spins() const { return spins_; }
  std::span<std::int8_t> mutable_spins() { return spins_; }

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  LatticeBox box_;
  int boundary_spin_;
  std::vector<std::int8_t> spins_;
};

}  // namespace peierls
