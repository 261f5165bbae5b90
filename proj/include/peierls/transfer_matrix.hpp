#pragma once

// Column transfer matrices for d = 2 boxes. A column is the full vertical
// slice x0 = const of height W = 2N + 1; states are encoded in mixed radix
// with the lowest digit at the bottom cell.

#include <cstddef>

#include <Eigen/Dense>

#include "peierls/disorder.hpp"
#include "peierls/model.hpp"

namespace peierls {

inline constexpr std::size_t kDefaultColumnStates = std::size_t{1} << 11;

class StripTransfer {
 public:
  /// Throws std::invalid_argument unless d = 2, T > 0 and width = 2N + 1;
  /// throws BudgetExceeded ("width too large") when states^W > max_states.
  StripTransfer(const ModelParams& p, int width, std::size_t max_states = kDefaultColumnStates);

  int width() const { return width_; }
  int columns() const { return params_.box().side(); }
  std::size_t column_states() const { return column_states_; }

  /// Spin of cell `row` in column state `c`.
  int cell_spin(std::size_t c, int row) const;

  /// log of the summed weight of columns 0..column, indexed by the state of `column`.
  Eigen::VectorXd forward(const DisorderField& h, int column) const;
  /// log of the summed weight of columns column+1..end given the state of `column`.
  Eigen::VectorXd backward(const DisorderField& h, int column) const;

  double log_partition(const DisorderField& h) const;

 private:
  /// Column self-weight -H_col/T: in-column bonds, exterior bonds and field.
  Eigen::VectorXd column_log_weight(const DisorderField& h, int column) const;

  ModelParams params_;
  int width_;
  std::size_t column_states_;
  /// exp((b(c, c') - W)/T) with b the bond sum between adjacent columns.
  Eigen::MatrixXd coupling_;
};

double strip_partition_function(const DisorderField& h, const ModelParams& p, int width);

}  // namespace peierls
