#pragma once

/** @file linear_operator.hpp
 * @brief Matrix-free operator interface whose products take an accuracy order p
 */

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bemrelax {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  //! y = A x computed at expansion order p (operators without expansions ignore p).
  virtual void apply(std::span<const double> x, int p, std::span<double> y) const = 0;
};

//! Row-major dense matrix; p is ignored. Used as a reference operator in tests and tools.
class DenseMatrixOperator : public LinearOperator {
 public:
  DenseMatrixOperator(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n * n) throw std::invalid_argument("DenseMatrixOperator: entry count must be n*n");
  }

  std::size_t size() const override { return n_; }
  void apply(std::span<const double> x, int, std::span<double> y) const override {
    if (x.size() != n_ || y.size() != n_) throw std::invalid_argument("DenseMatrixOperator: dimension mismatch");
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
      y[i] = s;
    }
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

}  // namespace bemrelax
