#include "peierls/model.hpp"

#include <cmath>
#include <stdexcept>

namespace peierls {

std::string to_string(ModelKind kind) { return kind == ModelKind::ising ? "ising" : "potts"; }

ModelParams ModelParams::ising(int dimension, int radius, double temperature, double field_strength, int boundary) {
  ModelParams p;
  p.dimension = dimension;
  p.radius = radius;
  p.temperature = temperature;
  p.field_strength = field_strength;
  p.kind = ModelKind::ising;
  p.states = 2;
  p.boundary = boundary;
  p.validate();
  return p;
}

ModelParams ModelParams::potts(int dimension, int radius, double temperature, double field_strength, int states,
                               int boundary) {
  ModelParams p;
  p.dimension = dimension;
  p.radius = radius;
  p.temperature = temperature;
  p.field_strength = field_strength;
  p.kind = ModelKind::potts;
  p.states = states;
  p.boundary = boundary;
  p.validate();
  return p;
}

ModelParams ModelParams::with_boundary(int b) const {
  ModelParams p = *this;
  p.boundary = b;
  p.validate();
  return p;
}

ModelParams ModelParams::with_field_strength(double eps) const {
  ModelParams p = *this;
  p.field_strength = eps;
  p.validate();
  return p;
}

ModelParams ModelParams::with_temperature(double t) const {
  ModelParams p = *this;
  p.temperature = t;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (dimension < 2 || dimension > kMaxDimension) {
    throw std::invalid_argument("d: dimension must be in [2, " + std::to_string(kMaxDimension) + "]");
  }
  if (radius < 0) throw std::invalid_argument("N: radius must be >= 0");
  if (!(temperature >= 0.0) || !std::isfinite(temperature)) throw std::invalid_argument("T: temperature must be >= 0");
  if (!(field_strength >= 0.0) || !std::isfinite(field_strength)) {
    throw std::invalid_argument("eps: field strength must be >= 0");
  }
  if (kind == ModelKind::ising) {
    if (states != 2) throw std::invalid_argument("q: Ising model has exactly 2 states");
    if (boundary != 1 && boundary != -1) throw std::invalid_argument("bc: Ising boundary must be +1 or -1");
  } else {
    if (states < 3) throw std::invalid_argument("q: q must be >= 3");
    if (states > 100) throw std::invalid_argument("q: q must be <= 100");
    if (boundary < 1 || boundary > states) throw std::invalid_argument("bc: Potts boundary state must be in [1, q]");
  }
}

int spin_row(ModelKind kind, int spin) { return kind == ModelKind::ising ? (spin > 0 ? 0 : 1) : spin - 1; }

int row_spin(ModelKind kind, int row) { return kind == ModelKind::ising ? (row == 0 ? 1 : -1) : row + 1; }

SpinConfig::SpinConfig(LatticeBox box, int boundary_spin, int initial_spin)
    : box_(box), boundary_spin_(boundary_spin), spins_(box.size(), static_cast<std::int8_t>(initial_spin)) {}

SpinConfig::SpinConfig(LatticeBox box, int boundary_spin, std::vector<std::int8_t> spins)
    : box_(box), boundary_spin_(boundary_spin), spins_(std::move(spins)) {
  if (spins_.size() != box_.size()) throw std::invalid_argument("SpinConfig: spin count does not match the box");
}

SpinConfig SpinConfig::uniform(const ModelParams& p) { return SpinConfig(p.box(), p.boundary, p.boundary); }

int SpinConfig::at(const Site& s) const { return box_.contains(s) ? spins_[box_.index(s)] : boundary_spin_; }

}  // namespace peierls
