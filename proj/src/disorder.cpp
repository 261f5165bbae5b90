#include "peierls/disorder.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace peierls {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

double unit_open(std::uint64_t bits) {
  // (0, 1), never 0, so log() below is finite
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double keyed_normal(std::uint64_t seed, const Site& site, int state) {
  std::uint64_t key = splitmix64(seed);
  for (int c : site.x) key = splitmix64(key ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
  key = splitmix64(key ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(state)));
  const double u1 = unit_open(splitmix64(key ^ 0x5851f42d4c957f2dULL));
  const double u2 = unit_open(splitmix64(key ^ 0x14057b7ef767814fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rotation::Rotation(int states, int power) : states_(states), power_(power) {
  if (states < 2) throw std::invalid_argument("Rotation: need at least 2 states");
  if (power < 0 || power > states) throw std::invalid_argument("Rotation: power must be in [0, q]");
}

int Rotation::apply(int k) const { return ((k - 1 - power_) % states_ + states_) % states_ + 1; }

int Rotation::apply_inverse(int k) const { return (k - 1 + power_) % states_ + 1; }

DisorderField::DisorderField(LatticeBox box, ModelKind kind, Eigen::MatrixXd values, std::uint64_t seed)
    : box_(box), kind_(kind), values_(std::move(values)), seed_(seed) {
  if (static_cast<std::size_t>(values_.cols()) != box_.size()) {
    throw std::invalid_argument("DisorderField: column count does not match the box");
  }
  if (kind_ == ModelKind::ising && values_.rows() != 1) {
    throw std::invalid_argument("DisorderField: Ising field stores one value per site");
  }
  if (kind_ == ModelKind::potts && values_.rows() < 3) {
    throw std::invalid_argument("DisorderField: Potts field stores q >= 3 values per site");
  }
}

DisorderField DisorderField::with_entry(int component, std::size_t site, double v) const {
  Eigen::MatrixXd values = values_;
  values(component, static_cast<Eigen::Index>(site)) = v;
  return DisorderField(box_, kind_, std::move(values), seed_);
}

DisorderField DisorderField::resampled_on(const SiteSet& sites, std::uint64_t seed) const {
  Eigen::MatrixXd values = values_;
  for (const Site& s : sites) {
    if (!box_.contains(s)) throw std::invalid_argument("resampled_on: site outside the box");
    const auto col = static_cast<Eigen::Index>(box_.index(s));
    for (Eigen::Index k = 0; k < values.rows(); ++k) values(k, col) = keyed_normal(seed, s, static_cast<int>(k) + 1);
  }
  return DisorderField(box_, kind_, std::move(values), seed);
}

DisorderField sample_field(const ModelParams& p, std::uint64_t seed) {
  p.validate();
  const LatticeBox box = p.box();
  Eigen::MatrixXd values(p.field_components(), static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site s = box.site(i);
    for (int k = 0; k < p.field_components(); ++k) {
      values(k, static_cast<Eigen::Index>(i)) = keyed_normal(seed, s, k + 1);
    }
  }
  return DisorderField(box, p.kind, std::move(values), seed);
}

DisorderField flip(const DisorderField& h, const SiteSet& a) {
  if (h.kind() != ModelKind::ising) throw std::invalid_argument("flip: field is not an Ising field");
  Eigen::MatrixXd values = h.values();
  for (std::size_t i : box_indices(a, h.box())) values(0, static_cast<Eigen::Index>(i)) *= -1.0;
  return DisorderField(h.box(), h.kind(), std::move(values), h.seed());
}

DisorderField rotate_field(const DisorderField& h, const SiteSet& a, const Rotation& r) {
  if (h.kind() != ModelKind::potts) throw std::invalid_argument("rotate_field: field is not a Potts field");
  if (r.states() != h.components()) throw std::invalid_argument("rotate_field: rotation and field disagree on q");
  Eigen::MatrixXd values = h.values();
  for (std::size_t i : box_indices(a, h.box())) {
    const auto col = static_cast<Eigen::Index>(i);
    for (int k = 1; k <= r.states(); ++k) values(k - 1, col) = h.value(r.apply_inverse(k), i);
  }
  return DisorderField(h.box(), h.kind(), std::move(values), h.seed());
}

SpinConfig flip_spins(const SpinConfig& sigma, const SiteSet& a) {
  SpinConfig out = sigma;
  for (std::size_t i : box_indices(a, sigma.box())) out.set(i, -sigma[i]);
  return out;
}

SpinConfig rotate_spins(const SpinConfig& sigma, const SiteSet& a, const Rotation& r) {
  SpinConfig out = sigma;
  for (std::size_t i : box_indices(a, sigma.box())) out.set(i, r.apply(sigma[i]));
  return out;
}

void write_field_csv(std::ostream& out, const DisorderField& h) {
  const LatticeBox& box = h.box();
  const int d = box.dimension();
  const bool potts = h.kind() == ModelKind::potts;
  out << "# d=" << d << ",N=" << box.radius() << ",q=" << (potts ? h.components() : 2) << ",seed=" << h.seed()
      << ",kind=" << to_string(h.kind()) << '\n';
  for (int i = 0; i < d; ++i) out << 'x' << i << ',';
  if (potts) out << "state,";
  out << "value\n";
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Site s = box.site(i);
    for (int k = 0; k < h.components(); ++k) {
      for (int a = 0; a < d; ++a) out << s[a] << ',';
      if (potts) out << k + 1 << ',';
      out << std::setprecision(17) << h.values()(k, static_cast<Eigen::Index>(i)) << '\n';
    }
  }
}

DisorderField read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::invalid_argument("field csv: missing header");
  int d = 0, n = 0, q = 0;
  unsigned long long seed = 0;
  char kind[16] = {0};
  if (std::sscanf(line.c_str(), "# d=%d,N=%d,q=%d,seed=%llu,kind=%15s", &d, &n, &q, &seed, kind) != 5) {
    throw std::invalid_argument("field csv: malformed header '" + line + "'");
  }
  const bool potts = std::string(kind) == "potts";
  const LatticeBox box(d, n);
  const int rows = potts ? q : 1;
  Eigen::MatrixXd values = Eigen::MatrixXd::Constant(rows, static_cast<Eigen::Index>(box.size()), std::nan(""));
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::vector<std::string> parts;
    while (std::getline(cells, cell, ',')) parts.push_back(cell);
    const std::size_t expected = static_cast<std::size_t>(d) + (potts ? 2 : 1);
    if (parts.size() != expected) throw std::invalid_argument("field csv: bad row '" + line + "'");
    Site s;
    for (int a = 0; a < d; ++a) s[a] = std::stoi(parts[static_cast<std::size_t>(a)]);
    const int state = potts ? std::stoi(parts[static_cast<std::size_t>(d)]) : 1;
    if (!box.contains(s) || state < 1 || state > rows) throw std::invalid_argument("field csv: entry out of range");
    values(state - 1, static_cast<Eigen::Index>(box.index(s))) = std::stod(parts.back());
  }
  if (values.hasNaN()) throw std::invalid_argument("field csv: missing entries");
  return DisorderField(box, potts ? ModelKind::potts : ModelKind::ising, std::move(values), seed);
}

}  // namespace peierls
