#include "peierls/transfer_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peierls/exact_gibbs.hpp"
#include "peierls/log_sum_exp.hpp"

namespace peierls {

namespace {

// Rescale so the largest entry is 1; returns the log of the factor removed.
double renormalize(Eigen::VectorXd& v) {
  const double top = v.maxCoeff();
  v /= top;
  return std::log(top);
}

}  // namespace

StripTransfer::StripTransfer(const ModelParams& p, int width, std::size_t max_states)
    : params_(p), width_(width), column_states_(0) {
  params_.validate();
  if (p.dimension != 2) throw std::invalid_argument("d: transfer matrices need d = 2");
  if (!(p.temperature > 0.0)) throw std::invalid_argument("T: transfer matrices need T > 0");
  if (width != p.box().side()) {
    throw std::invalid_argument("W: strip width must equal the box side 2N + 1 = " + std::to_string(p.box().side()));
  }
  const std::uint64_t count = configuration_count(p.states, static_cast<std::size_t>(width));
  if (count > max_states) {
    throw BudgetExceeded("width too large: " + std::to_string(p.states) + "^" + std::to_string(width) +
                         " column states exceed " + std::to_string(max_states));
  }
  column_states_ = static_cast<std::size_t>(count);

  const auto n = static_cast<Eigen::Index>(column_states_);
  coupling_.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      double bond = 0.0;
      for (int r = 0; r < width_; ++r) {
        const int s = cell_spin(static_cast<std::size_t>(a), r);
        const int t = cell_spin(static_cast<std::size_t>(b), r);
        bond += p.is_ising() ? s * t : (s == t ? 1.0 : 0.0);
      }
      coupling_(a, b) = std::exp((bond - width_) / p.temperature);
    }
  }
}

int StripTransfer::cell_spin(std::size_t c, int row) const {
  for (int r = 0; r < row; ++r) c /= static_cast<std::size_t>(params_.states);
  const int digit = static_cast<int>(c % static_cast<std::size_t>(params_.states));
  return params_.is_ising() ? row_spin(ModelKind::ising, digit) : digit + 1;
}

Eigen::VectorXd StripTransfer::column_log_weight(const DisorderField& h, int column) const {
  const LatticeBox box = params_.box();
  const int n = params_.radius;
  const int x0 = column - n;
  const bool edge_column = column == 0 || column == columns() - 1;
  auto pair = [&](int a, int b) { return params_.is_ising() ? double(a * b) : (a == b ? 1.0 : 0.0); };

  Eigen::VectorXd w(static_cast<Eigen::Index>(column_states_));
  for (std::size_t c = 0; c < column_states_; ++c) {
    double coupling = 0.0;
    double field = 0.0;
    for (int r = 0; r < width_; ++r) {
      const int s = cell_spin(c, r);
      if (r + 1 < width_) coupling += pair(s, cell_spin(c, r + 1));
      if (r == 0) coupling += pair(s, params_.boundary);
      if (r == width_ - 1) coupling += pair(s, params_.boundary);
      if (edge_column) coupling += pair(s, params_.boundary) * (columns() == 1 ? 2 : 1);
      const std::size_t site = box.index(make_site({x0, r - n}));
      field += params_.is_ising() ? h[site] * s : h.value(s, site);
    }
    w(static_cast<Eigen::Index>(c)) = (coupling + params_.field_strength * field) / params_.temperature;
  }
  return w;
}

Eigen::VectorXd StripTransfer::forward(const DisorderField& h, int column) const {
  if (column < 0 || column >= columns()) throw std::out_of_range("column outside the strip");
  const double hop = width_ / params_.temperature;
  Eigen::VectorXd lw = column_log_weight(h, 0);
  double scale = lw.maxCoeff();
  Eigen::VectorXd v = (lw.array() - scale).exp().matrix();
  for (int c = 1; c <= column; ++c) {
    lw = column_log_weight(h, c);
    const double shift = lw.maxCoeff();
    v = (coupling_.transpose() * v).cwiseProduct((lw.array() - shift).exp().matrix());
    scale += shift + hop + renormalize(v);
  }
  return v.array().log().matrix() + Eigen::VectorXd::Constant(v.size(), scale);
}

Eigen::VectorXd StripTransfer::backward(const DisorderField& h, int column) const {
  if (column < 0 || column >= columns()) throw std::out_of_range("column outside the strip");
  const double hop = width_ / params_.temperature;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(column_states_));
  double scale = 0.0;
  for (int c = columns() - 1; c > column; --c) {
    const Eigen::VectorXd lw = column_log_weight(h, c);
    const double shift = lw.maxCoeff();
    v = coupling_ * v.cwiseProduct((lw.array() - shift).exp().matrix());
    scale += shift + hop + renormalize(v);
  }
  return v.array().log().matrix() + Eigen::VectorXd::Constant(v.size(), scale);
}

double StripTransfer::log_partition(const DisorderField& h) const {
  if (!(h.box() == params_.box()) || h.kind() != params_.kind) {
    throw std::invalid_argument("field does not match the model parameters");
  }
  return log_sum_exp(forward(h, columns() - 1));
}

double strip_partition_function(const DisorderField& h, const ModelParams& p, int width) {
  return StripTransfer(p, width).log_partition(h);
}

}  // namespace peierls
