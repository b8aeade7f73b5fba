#pragma once

#include "tropicorr/error.hpp"
#include "tropicorr/exactla/normal_form.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tropicorr {

// Sublattice of ℤ^ambient_rank stored by its row Hermite basis, so equality of
// lattices is equality of bases.
class Sublattice {
 public:
  explicit Sublattice(std::size_t ambient_rank = 0) : ambient_rank_(ambient_rank), basis_(0, ambient_rank) {}

  static Sublattice span(std::size_t ambient_rank, const std::vector<IntVec>& generators) {
    return from_matrix(IntMatrix::from_rows(generators, ambient_rank));
  }

  static Sublattice from_matrix(const IntMatrix& generators) {
    Sublattice l(generators.cols());
    l.basis_ = hermite_rows(generators);
    return l;
  }

  static Sublattice full(std::size_t n) { return from_matrix(IntMatrix::identity(n)); }

  std::size_t ambient_rank() const { return ambient_rank_; }
  std::size_t rank() const { return basis_.rows(); }
  std::size_t corank() const { return ambient_rank_ - rank(); }
  const IntMatrix& basis() const { return basis_; }

  bool contains(const IntVec& v) const {
    IntMatrix extended = vstack(basis_, IntMatrix::from_rows({v}, ambient_rank_));
    return hermite_rows(extended) == basis_;
  }

  // Membership in L ⊗ ℚ.
  bool contains_rational(const RatVec& v) const {
    const Int den = common_denominator(v);
    IntVec scaled;
    for (const auto& x : v) scaled.push_back(numerator(x * den));
    if (is_zero(scaled)) return true;
    return tropicorr::rank(vstack(basis_, IntMatrix::from_rows({scaled}, ambient_rank_))) == rank();
  }

  friend bool operator==(const Sublattice&, const Sublattice&) = default;

 private:
  std::size_t ambient_rank_;
  IntMatrix basis_;
};

// {x ∈ ℤ^cols : A x = 0}; saturated by construction.
inline Sublattice kernel_lattice(const IntMatrix& a) {
  const SNFResult s = snf(a);
  const std::size_t r = s.divisors.size();
  std::vector<IntVec> gens;
  for (std::size_t j = r; j < a.cols(); ++j) gens.push_back(s.V.col(j));
  return Sublattice::span(a.cols(), gens);
}

inline Sublattice saturation(const Sublattice& l) {
  // (L ⊗ ℚ) ∩ ℤⁿ is the kernel of a matrix whose rows span L's annihilator.
  const Sublattice annihilator = kernel_lattice(l.basis());
  IntMatrix ann = annihilator.basis();
  if (ann.rows() == 0) return Sublattice::full(l.ambient_rank());
  return kernel_lattice(ann);
}

inline bool is_saturated(const Sublattice& l) { return saturation(l) == l; }

inline Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw Error("AmbientMismatch", "sum of lattices in different ambients");
  return Sublattice::from_matrix(vstack(a.basis(), b.basis()));
}

inline Sublattice intersect(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank()) throw Error("AmbientMismatch", "intersection of lattices in different ambients");
  const std::size_t n = a.ambient_rank();
  const std::size_t ka = a.rank();
  const std::size_t kb = b.rank();
  // Solve s·A = t·B, i.e. (s, t) in the kernel of [Aᵀ | −Bᵀ].
  IntMatrix m(n, ka + kb);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ka; ++j) m(i, j) = a.basis()(j, i);
    for (std::size_t j = 0; j < kb; ++j) m(i, ka + j) = -b.basis()(j, i);
  }
  const Sublattice rel = kernel_lattice(m);
  std::vector<IntVec> gens;
  for (std::size_t r = 0; r < rel.rank(); ++r) {
    IntVec x(n);
    for (std::size_t j = 0; j < ka; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += rel.basis()(r, j) * a.basis()(j, i);
    gens.push_back(std::move(x));
  }
  return Sublattice::span(n, gens);
}

// Product of the invariant factors = gcd of the maximal minors of the basis.
inline Int covolume_factor(const Sublattice& l) {
  Int p = 1;
  for (const auto& d : snf(l.basis()).divisors) p *= d;
  return p;
}

// |L1 / L2| for L2 ⊆ L1 of equal rank.
inline Int index(const Sublattice& l1, const Sublattice& l2) {
  if (l1.ambient_rank() != l2.ambient_rank()) throw Error("AmbientMismatch", "index of lattices in different ambients");
  if (l1.rank() != l2.rank())
    throw Error("IndexInfinite", "ranks " + std::to_string(l1.rank()) + " and " + std::to_string(l2.rank()) + " differ");
  if (!(lattice_sum(l1, l2) == l1)) throw Error("NotSublattice", "second lattice is not contained in the first");
  return covolume_factor(l2) / covolume_factor(l1);
}

struct PrimitivePart {
  IntVec vector;  // zero iff the input is zero
  Int length;     // integral length; 0 for the zero vector
};

inline PrimitivePart primitive_part(const IntVec& v) {
  PrimitivePart p{v, content(v)};
  if (p.length > 1)
    for (auto& x : p.vector) x /= p.length;
  return p;
}

// A corank×n matrix Q with kernel exactly L and Q: ℤⁿ → ℤ^corank onto,
// presenting ℤⁿ/L ≅ ℤ^corank. pre: L saturated.
inline IntMatrix quotient_projection(const Sublattice& l) {
  if (!is_saturated(l)) throw Error("BadConstraint", "quotient by a non-saturated lattice has torsion");
  const std::size_t n = l.ambient_rank();
  const std::size_t k = l.rank();
  // With U·B·V = [I 0], L is spanned by the first k rows of V⁻¹, and the
  // coordinates of x in that basis are xᵀV; keep the last n−k of them.
  const SNFResult s = snf(l.basis());
  IntMatrix q(n - k, n);
  for (std::size_t r = 0; r < n - k; ++r)
    for (std::size_t c = 0; c < n; ++c) q(r, c) = s.V(c, k + r);
  return hermite_rows(q);
}

}  // namespace tropicorr
