#pragma once

#include "tropicorr/exactla/scalar.hpp"

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tropicorr {

// Dense row-major integer matrix. Zero-row and zero-column shapes are legal
// and keep their other dimension, so a 0×n matrix still has n columns.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Int>& entries() const { return entries_; }

  Int& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return entries_[r * cols_ + c];
  }
  const Int& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return entries_[r * cols_ + c];
  }

  IntVec row(std::size_t r) const {
    return IntVec(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  IntVec col(std::size_t c) const {
    IntVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  std::vector<IntVec> row_list() const {
    std::vector<IntVec> out;
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  // row[dst] += f * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& f) {
    if (f == 0) return;
    for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += f * (*this)(src, c);
  }
  // col[dst] += f * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& f) {
    if (f == 0) return;
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += f * (*this)(r, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }
  void negate_col(std::size_t c) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
  }

  bool is_zero() const {
    for (const auto& x : entries_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
      }
    return out;
  }

  friend IntVec operator*(const IntMatrix& a, const IntVec& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("matrix shape mismatch in product");
    IntVec out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) out[i] += a(i, k) * v[k];
    return out;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t r = 0; r < rows_; ++r) {
      s += r ? ",[" : "[";
      for (std::size_t c = 0; c < cols_; ++c) s += (c ? "," : "") + (*this)(r, c).str();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> entries_;
};

inline IntMatrix vstack(const IntMatrix& top, const IntMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack column mismatch");
  IntMatrix out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) out(r, c) = top(r, c);
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) out(top.rows() + r, c) = bottom(r, c);
  return out;
}

// Fraction-free Gaussian elimination (Bareiss); every intermediate division is exact.
inline Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Rank over ℚ by fraction-free elimination.
inline std::size_t rank(const IntMatrix& a) {
  IntMatrix m = a;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.swap_rows(r, p);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const Int g = gcd(m(r, c), m(i, c));
      const Int fr = m(i, c) / g;
      const Int fi = m(r, c) / g;
      Int g_row = 0;
      for (std::size_t j = c; j < m.cols(); ++j) {
        m(i, j) = m(i, j) * fi - m(r, j) * fr;
        g_row = gcd(g_row, m(i, j));
      }
      if (g_row > 1)
        for (std::size_t j = c; j < m.cols(); ++j) m(i, j) /= g_row;
    }
    ++r;
  }
  return r;
}

}  // namespace tropicorr
