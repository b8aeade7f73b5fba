#pragma once

#include "tropicorr/error.hpp"
#include "tropicorr/exactla/normal_form.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tropicorr {

// ℤ^rank ⊕ ⊕ ℤ/torsion[i], torsion entries ≥ 2 in divisibility-chain order.
struct FGAbelianGroup {
  std::size_t rank = 0;
  std::vector<Int> torsion;

  bool is_trivial() const { return rank == 0 && torsion.empty(); }

  Int torsion_order() const {
    Int o = 1;
    for (const auto& d : torsion) o *= d;
    return o;
  }

  std::string to_string() const {
    std::string s = "(rank " + std::to_string(rank) + ", torsion [";
    for (std::size_t i = 0; i < torsion.size(); ++i) s += (i ? "," : "") + torsion[i].str();
    return s + "])";
  }

  friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;
};

// ℤ^rows / image(A).
inline FGAbelianGroup cokernel_group(const IntMatrix& a) {
  const SNFResult s = snf(a);
  FGAbelianGroup g;
  g.rank = a.rows() - s.divisors.size();
  for (const auto& d : s.divisors)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

struct CoeffGroup {
  enum class Kind { Integers, Rationals, FieldOfChar, UnitsAlgClosed };
  Kind kind = Kind::Integers;
  std::uint64_t characteristic = 0;  // zero or prime; only meaningful for the last two kinds

  static CoeffGroup integers() { return {Kind::Integers, 0}; }
  static CoeffGroup rationals() { return {Kind::Rationals, 0}; }
  static CoeffGroup field(std::uint64_t p) { return checked({Kind::FieldOfChar, p}); }
  static CoeffGroup units(std::uint64_t p) { return checked({Kind::UnitsAlgClosed, p}); }

  bool is_field() const { return kind == Kind::Rationals || kind == Kind::FieldOfChar; }

  // Characteristic of the field, with ℚ counted as characteristic 0.
  std::uint64_t field_characteristic() const { return kind == Kind::Rationals ? 0 : characteristic; }

  std::string name() const {
    switch (kind) {
      case Kind::Integers: return "Z";
      case Kind::Rationals: return "Q";
      case Kind::FieldOfChar: return "F" + std::to_string(characteristic);
      case Kind::UnitsAlgClosed: return "kstar" + std::to_string(characteristic);
    }
    return "?";
  }

  friend bool operator==(const CoeffGroup&, const CoeffGroup&) = default;

 private:
  static CoeffGroup checked(CoeffGroup g) {
    if (g.characteristic != 0 && !is_prime(g.characteristic))
      throw Error("BadCharacteristic", std::to_string(g.characteristic) + " is neither zero nor prime");
    return g;
  }
};

// Size of a group of the form G^free_rank ⊕ (finite group) for G ∈ {ℤ, k*},
// or of a vector space of dimension kdim when G is a field. Only one of
// free_rank / kdim is ever nonzero for a given G.
struct GroupSize {
  std::size_t free_rank = 0;
  std::size_t kdim = 0;
  Int torsion_order = 1;

  bool is_finite() const { return free_rank == 0 && kdim == 0; }
  bool is_trivial() const { return is_finite() && torsion_order == 1; }
  std::optional<Int> finite_order() const {
    if (!is_finite()) return std::nullopt;
    return torsion_order;
  }

  // Size of an extension of `b` by `a` (ranks and dimensions add, orders multiply).
  friend GroupSize operator+(GroupSize a, const GroupSize& b) {
    a.free_rank += b.free_rank;
    a.kdim += b.kdim;
    a.torsion_order *= b.torsion_order;
    return a;
  }

  friend bool operator==(const GroupSize&, const GroupSize&) = default;
};

enum class BaseChangeMode { Tensor, Tor };

inline Int prime_to_part(Int d, std::uint64_t p) {
  if (p == 0) return d;
  while (d % p == 0) d /= p;
  return d;
}

// A ⊗ G or Tor¹(A, G), from the cyclic decomposition of A.
inline GroupSize base_change(const FGAbelianGroup& a, const CoeffGroup& g, BaseChangeMode mode) {
  GroupSize out;
  const bool tensor = mode == BaseChangeMode::Tensor;
  switch (g.kind) {
    case CoeffGroup::Kind::Integers:
      if (tensor) {
        out.free_rank = a.rank;
        out.torsion_order = a.torsion_order();
      }
      break;
    case CoeffGroup::Kind::Rationals:
      if (tensor) out.kdim = a.rank;
      break;
    case CoeffGroup::Kind::FieldOfChar: {
      const std::uint64_t p = g.characteristic;
      std::size_t hits = 0;
      if (p != 0)
        for (const auto& d : a.torsion)
          if (d % p == 0) ++hits;
      out.kdim = tensor ? a.rank + hits : hits;
      break;
    }
    case CoeffGroup::Kind::UnitsAlgClosed:
      if (tensor) {
        out.free_rank = a.rank;  // k* is divisible, so ℤ/d ⊗ k* = 0
      } else {
        for (const auto& d : a.torsion) out.torsion_order *= prime_to_part(d, g.characteristic);
      }
      break;
  }
  return out;
}

}  // namespace tropicorr
