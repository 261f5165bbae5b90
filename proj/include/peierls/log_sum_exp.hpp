#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace peierls {

/// Streaming log(sum_i exp(x_i)). Keeps the running maximum as the shift so
/// the accumulated sum stays in [1, count].
template <typename Scalar>
class LogSumExp {
 public:
  void add(Scalar x) {
    if (x == -std::numeric_limits<Scalar>::infinity()) return;
    if (x > max_) {
      sum_ = sum_ * std::exp(max_ - x) + Scalar(1);
      max_ = x;
    } else {
      sum_ += std::exp(x - max_);
    }
  }

  void merge(const LogSumExp& other) {
    if (other.sum_ == Scalar(0)) return;
    if (other.max_ > max_) {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    } else {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    }
  }

  Scalar value() const { return sum_ == Scalar(0) ? -std::numeric_limits<Scalar>::infinity() : max_ + std::log(sum_); }

 private:
  Scalar max_ = -std::numeric_limits<Scalar>::infinity();
  Scalar sum_ = Scalar(0);
};

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar shift = x.maxCoeff();
  if (!std::isfinite(shift)) return shift;
  return shift + std::log((x.derived().array() - shift).exp().sum());
}

}  // namespace peierls
