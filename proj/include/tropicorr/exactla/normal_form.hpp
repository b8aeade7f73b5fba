#pragma once

#include "tropicorr/exactla/matrix.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace tropicorr {

struct SNFResult {
  IntMatrix U;  // unimodular, rows × rows
  IntMatrix V;  // unimodular, cols × cols
  IntMatrix D;  // U·A·V
  std::vector<Int> divisors;  // positive, divisors[i] | divisors[i+1]
};

namespace detail {

// Smallest nonzero |entry| in the block [t.., t..]; ties broken row-major.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_entry(const IntMatrix& d, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Int best_abs;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Int a = abs_value(d(i, j));
      if (!best || a < best_abs) {
        best = {i, j};
        best_abs = std::move(a);
      }
    }
  return best;
}

}  // namespace detail

// Deterministic Smith normal form: U·A·V = D.
inline SNFResult snf(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SNFResult res{IntMatrix::identity(m), IntMatrix::identity(n), a, {}};
  IntMatrix& d = res.D;
  IntMatrix& u = res.U;
  IntMatrix& v = res.V;

  auto bring_to_pivot = [&](std::size_t t) {
    auto pos = detail::smallest_entry(d, t);
    if (!pos) return false;
    d.swap_rows(t, pos->first);
    u.swap_rows(t, pos->first);
    d.swap_cols(t, pos->second);
    v.swap_cols(t, pos->second);
    return true;
  };

  std::size_t t = 0;
  while (t < m && t < n) {
    if (!bring_to_pivot(t)) break;
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        const Int q = d(i, t) / d(t, t);
        d.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        const Int q = d(t, j) / d(t, t);
        d.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        bring_to_pivot(t);
        continue;
      }
      // The pivot must divide the whole trailing block; otherwise pull an
      // offending row into the pivot row and keep reducing.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row_multiple(t, i, 1);
            u.add_row_multiple(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
    res.divisors.push_back(d(t, t));
    ++t;
  }
  return res;
}

// Row-style Hermite normal form with zero rows dropped: pivots positive and
// strictly moving right, entries above a pivot reduced into [0, pivot).
// Two generator sets span the same lattice iff their forms are equal.
inline IntMatrix hermite_rows(const IntMatrix& a) {
  IntMatrix h = a;
  const std::size_t m = h.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < m; ++c) {
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (best == m || abs_value(h(i, c)) < abs_value(h(best, c)))) best = i;
      if (best == m) break;
      h.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        h.add_row_multiple(i, r, -(h(i, c) / h(r, c)));
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (r == m || h(r, c) == 0) continue;
    if (h(r, c) < 0) h.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) h.add_row_multiple(i, r, -floor_div(h(i, c), h(r, c)));
    ++r;
  }
  IntMatrix out(r, h.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(i, j);
  return out;
}

}  // namespace tropicorr
