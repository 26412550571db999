#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "regmeas/rational.hpp"

namespace regmeas {

using Vec = std::vector<Rational>;

/// Dense matrix over exact rationals. Small dimensions only (d <= 12 in
/// practice); all arithmetic is exact.
class RatMat {
 public:
  RatMat() = default;
  RatMat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMat(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

  static RatMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RatMat operator+(const RatMat& other) const;
  RatMat operator-(const RatMat& other) const;
  RatMat operator*(const RatMat& other) const;
  RatMat operator*(const Rational& scalar) const;

  bool operator==(const RatMat& other) const = default;

  RatMat transpose() const;
  RatMat pow(unsigned long exponent) const;
  Rational trace() const;

  /// Gauss-Jordan inverse; nullopt when singular.
  std::optional<RatMat> inverse() const;

  /// Matrix * column vector.
  Vec apply(const Vec& v) const;
  /// Row vector * matrix.
  Vec apply_left(const Vec& row) const;

  bool is_nonnegative() const;
  bool is_positive() const;
  bool is_zero() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational dot(const Vec& a, const Vec& b);

/// Basis of the (right) null space of A.
std::vector<Vec> null_space(RatMat a);

/// Basis of the column space of A (a subset of A's columns after RREF).
std::vector<Vec> column_space(RatMat a);

/// Exact solution of A x = b; nullopt when inconsistent. For underdetermined
/// systems an arbitrary particular solution is returned.
std::optional<Vec> solve_linear(RatMat a, Vec b);

}  // namespace regmeas
