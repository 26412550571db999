#include "regmeas/ratmat.hpp"

#include <utility>

#include "regmeas/errors.hpp"

namespace regmeas {

RatMat::RatMat(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw FormatError("matrix entry count does not match its shape");
}

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMat RatMat::operator+(const RatMat& other) const {
  RatMat out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = data_[i] + other.data_[i];
  return out;
}

RatMat RatMat::operator-(const RatMat& other) const {
  RatMat out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = data_[i] - other.data_[i];
  return out;
}

RatMat RatMat::operator*(const RatMat& other) const {
  RatMat out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t l = 0; l < cols_; ++l) {
      const Rational& x = (*this)(i, l);
      if (x == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        out(i, j) += x * other(l, j);
    }
  return out;
}

RatMat RatMat::operator*(const Rational& scalar) const {
  RatMat out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = data_[i] * scalar;
  return out;
}

RatMat RatMat::transpose() const {
  RatMat out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

RatMat RatMat::pow(unsigned long exponent) const {
  RatMat result = identity(rows_);
  RatMat base = *this;
  while (exponent > 0) {
    if (exponent & 1UL) result = result * base;
    exponent >>= 1UL;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Rational RatMat::trace() const {
  Rational t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

std::optional<RatMat> RatMat::inverse() const {
  const std::size_t n = rows_;
  RatMat a = *this;
  RatMat inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rational factor = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(col, j);
        inv(i, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

Vec RatMat::apply(const Vec& v) const {
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

Vec RatMat::apply_left(const Vec& row) const {
  Vec out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    Rational acc = 0;
    for (std::size_t i = 0; i < rows_; ++i) acc += row[i] * (*this)(i, j);
    out[j] = acc;
  }
  return out;
}

bool RatMat::is_nonnegative() const {
  for (const auto& x : data_)
    if (x < 0) return false;
  return true;
}

bool RatMat::is_positive() const {
  for (const auto& x : data_)
    if (x <= 0) return false;
  return true;
}

bool RatMat::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

Rational dot(const Vec& a, const Vec& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

namespace {

// Row-reduces in place; returns the pivot column of each pivot row.
std::vector<std::size_t> rref(RatMat& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(row, j));
    Rational p = a(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) /= p;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational factor = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= factor * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<Vec> null_space(RatMat a) {
  const std::size_t n = a.cols();
  std::vector<std::size_t> pivots = rref(a);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    Vec v(n, Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -a(r, free_col);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vec> column_space(RatMat a) {
  RatMat original = a;
  std::vector<std::size_t> pivots = rref(a);
  std::vector<Vec> basis;
  for (auto c : pivots) {
    Vec v(original.rows());
    for (std::size_t i = 0; i < original.rows(); ++i) v[i] = original(i, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve_linear(RatMat a, Vec b) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  RatMat aug(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = b[i];
  }
  std::vector<std::size_t> pivots = rref(aug);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == cols) return std::nullopt;  // inconsistent
  Vec x(cols, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, cols);
  return x;
}

}  // namespace regmeas
