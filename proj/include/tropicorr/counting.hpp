#pragma once

// Torsor sizes and correspondence counts. Every count is taken on Γ^st.

#include "tropicorr/complexes.hpp"
#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/paramcurve.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tropicorr {

inline std::size_t moduli_dimension(const ParamTropicalCurve& p) {
  const ParamTropicalCurve st = stabilize(p);
  std::size_t dim = 0;
  for (const auto& v : st.curve.finite_vertices) {
    const std::size_t val = st.curve.valency(v);
    if (val > 3) dim += val - 3;
  }
  return dim;
}

// ∏ l(e) over bounded edges of Γ^st with nonzero slope.
inline Int stacky_multiplier(const ParamTropicalCurve& p) {
  const ParamTropicalCurve st = stabilize(p);
  Int prod = 1;
  for (const auto& e : st.curve.edges) {
    if (!st.curve.is_bounded(e)) continue;
    const Int l = edge_geometry(st, e.id).multiplicity;
    if (l != 0) prod *= l;
  }
  return prod;
}

namespace detail {

inline CoeffGroup residue_field(std::uint64_t char_p) {
  return char_p == 0 ? CoeffGroup::rationals() : CoeffGroup::field(char_p);
}

inline std::optional<AffineConstraintSet> nonempty(const std::optional<AffineConstraintSet>& a) {
  if (a && a->empty()) return std::nullopt;
  return a;
}

}  // namespace detail

// Size of E¹_{k*}(Γ^st[, A]), the group acting on the Γ-reductions.
inline GroupSize reduction_torsor(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a, std::uint64_t char_p) {
  const ParamTropicalCurve st = stabilize(p);
  if (zero_slope_bounded_count(st) != 0)
    throw Error("HypothesisFailed:no_zero_slope_bounded", std::to_string(zero_slope_bounded_count(st)) + " bounded edges have zero slope");
  ComplexSpec spec;
  spec.constraints = detail::nonempty(a);
  const ComplexReport r = compute(st, spec, CoeffGroup::units(char_p));
  if (!r.E2_G.is_trivial()) throw Error("ObstructionNonzero", "E2 over k* does not vanish");
  return r.E1_G;
}

struct CountHypotheses {
  bool trivalent = false;
  bool satisfies_A = false;
  bool regular = false;
  bool codim_match = false;
  bool no_zero_slope_bounded = false;
  bool char_ok = false;
  std::optional<bool> elliptic_regular;

  // Failures are reported in a fixed order; char_ok precedes regularity because
  // a characteristic dividing some l(e) also makes CE² ⊗ k nonzero.
  std::optional<std::string> first_failure() const {
    if (!trivalent) return "trivalent";
    if (!satisfies_A) return "satisfies_A";
    if (!no_zero_slope_bounded) return "no_zero_slope_bounded";
    if (!char_ok) return "char_ok";
    if (!codim_match) return "codim_match";
    if (elliptic_regular) {
      if (!*elliptic_regular) return "elliptic_regular";
    } else if (!regular) {
      return "regular";
    }
    return std::nullopt;
  }
};

struct CrossCheck {
  std::string name;
  Int value = 0;
  bool holds = false;
};

struct CountResult {
  Int count = 0;
  std::pair<Int, Int> factorization{1, 1};
  std::vector<CrossCheck> cross_checks;
  CountHypotheses hypotheses;
};

namespace detail {

inline CountHypotheses count_hypotheses(const ParamTropicalCurve& st, const std::optional<AffineConstraintSet>& a, std::uint64_t char_p,
                                        bool elliptic) {
  CountHypotheses h;
  h.trivalent = true;
  for (const auto& v : st.curve.finite_vertices) h.trivalent = h.trivalent && st.curve.valency(v) == 3;
  h.satisfies_A = !a || check_constraint(st, *a).satisfies;
  h.no_zero_slope_bounded = zero_slope_bounded_count(st) == 0;
  h.char_ok = true;
  if (char_p != 0)
    for (const auto& e : st.curve.edges) {
      const Int l = edge_geometry(st, e.id).multiplicity;
      if (l != 0 && l % char_p == 0) h.char_ok = false;
    }
  const std::size_t codim = a ? a->codim() : 0;
  h.codim_match = rank(st) == codim + (elliptic ? 1 : 0);
  if (h.satisfies_A && (!elliptic || h.no_zero_slope_bounded)) {
    const RegularityVerdict v = regularity(st, a, residue_field(char_p), elliptic);
    h.regular = v.g_regular;
    if (elliptic) h.elliptic_regular = *v.elliptically_regular;
  } else if (elliptic) {
    h.elliptic_regular = false;
  }
  return h;
}

inline void require_hypotheses(const CountHypotheses& h) {
  if (const auto failed = h.first_failure()) throw Error("HypothesisFailed:" + *failed, "hypothesis " + *failed + " does not hold");
}

inline void require_cross_checks(const CountResult& r) {
  for (const auto& c : r.cross_checks)
    if (!c.holds) throw Error("CrossCheckFailed", c.name + " gives " + c.value.str() + ", expected " + r.count.str());
}

inline Int finite_or_throw(const GroupSize& g, const char* what) {
  const auto o = g.finite_order();
  if (!o) throw Error("CrossCheckFailed", std::string(what) + " is infinite");
  return *o;
}

inline Int cokernel_order(const IntMatrix& m, const char* what) {
  return finite_or_throw(base_change(cokernel_group(m), CoeffGroup::integers(), BaseChangeMode::Tensor), what);
}

}  // namespace detail

inline CountResult correspondence_count(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a_in, std::uint64_t char_p) {
  const ParamTropicalCurve st = stabilize(p);
  const auto a = detail::nonempty(a_in);
  CountResult r;
  r.hypotheses = detail::count_hypotheses(st, a, char_p, false);
  detail::require_hypotheses(r.hypotheses);

  ComplexSpec spec;
  spec.constraints = a;
  spec.variant = Variant::Beta;
  const IntMatrix beta = build_matrix(st, spec);
  r.count = detail::cokernel_order(beta, "CE2(Gamma, A)");

  const CoeffGroup units = CoeffGroup::units(char_p);
  const Int ce1_units = detail::finite_or_throw(compute(st, spec, units).E1_G, "CE1 over k*");
  spec.variant = Variant::B;
  const Int e1_units = detail::finite_or_throw(compute(st, spec, units).E1_G, "E1 over k*");
  const Int e2 = detail::cokernel_order(build_matrix(st, spec), "E2(Gamma, A)");
  const Int lprod = stacky_multiplier(st);

  r.factorization = {e1_units, lprod};
  r.cross_checks = {
      {"|E1_k*(Gamma,A)| * prod l(e)", e1_units * lprod, e1_units * lprod == r.count},
      {"|E2(Gamma,A)| * prod l(e)", e2 * lprod, e2 * lprod == r.count},
      {"|CE1_k*(Gamma,A)|", ce1_units, ce1_units == r.count},
  };
  detail::require_cross_checks(r);
  return r;
}

// The j-augmented complex exists only in the stacky variant, so the
// factorization carries the whole count in its first part.
inline CountResult elliptic_count(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a_in, std::uint64_t char_p) {
  if (genus(p.curve) != 1) throw Error("GenusNotOne", "genus is " + std::to_string(genus(p.curve)));
  const ParamTropicalCurve st = stabilize(p);
  const auto a = detail::nonempty(a_in);
  CountResult r;
  r.hypotheses = detail::count_hypotheses(st, a, char_p, true);
  detail::require_hypotheses(r.hypotheses);

  ComplexSpec spec;
  spec.constraints = a;
  spec.variant = Variant::Beta;
  spec.elliptic = true;
  r.count = detail::cokernel_order(build_matrix(st, spec), "CE2(Gamma, A, j)");
  const Int ce1_units = detail::finite_or_throw(compute(st, spec, CoeffGroup::units(char_p)).E1_G, "CE1 over k* with j");
  r.factorization = {r.count, 1};
  r.cross_checks = {{"|CE1_k*(Gamma,A,j)|", ce1_units, ce1_units == r.count}};
  detail::require_cross_checks(r);
  return r;
}

}  // namespace tropicorr
