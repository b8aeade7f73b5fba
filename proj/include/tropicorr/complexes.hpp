#pragma once

#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/paramcurve.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tropicorr {

// B: edge columns carry n_e. Beta: edge columns carry l(e)·n_e.
enum class Variant { B, Beta };

struct ComplexSpec {
  Variant variant = Variant::B;
  std::optional<AffineConstraintSet> constraints;
  bool elliptic = false;
  std::optional<Orientation> orientation;  // default_orientation when absent
};

// Matrix plus the meaning of its rows and columns.
struct ComplexMatrix {
  IntMatrix matrix;
  std::vector<std::string> vertex_blocks;  // n columns each, in order
  std::vector<std::string> edge_columns;   // one column per bounded edge with nonzero slope
  std::vector<std::string> edge_blocks;    // n rows each, every bounded edge
  std::vector<std::size_t> constraint_blocks;  // corank rows per constraint
  bool delta_row = false;
};

namespace detail {

inline void check_preconditions(const ParamTropicalCurve& p, const ComplexSpec& spec, const Orientation& o) {
  require_balanced(p);
  if (spec.constraints) {
    const ConstraintReport r = check_constraint(p, *spec.constraints);
    if (!r.satisfies) throw Error("ConstraintUnsatisfied", r.issues.empty() ? "constraint violated" : r.issues.front());
  }
  if (spec.elliptic) {
    for (const auto& step : unique_cycle(p.curve)) {
      const EdgeGeometry g = edge_geometry(p, p.curve.edges[step.edge], o);
      if (!g.slope) throw Error("ZeroSlopeCycleEdge", "cycle edge '" + p.curve.edges[step.edge].id + "' has zero slope");
      if (spec.variant == Variant::B && g.multiplicity != 1)
        throw Error("UnsupportedVariant", "elliptic complex of the B variant needs unit multiplicities");
    }
  }
}

}  // namespace detail

// Rows: n per bounded edge, then corank(L_i) per constraint, then the δ row.
// Columns: n per finite vertex, then one per bounded edge of nonzero slope.
inline ComplexMatrix build_complex(const ParamTropicalCurve& p, const ComplexSpec& spec) {
  const TropicalCurve& c = p.curve;
  const Orientation o = spec.orientation ? *spec.orientation : default_orientation(c);
  detail::check_preconditions(p, spec, o);
  const std::size_t n = p.lattice_rank;

  ComplexMatrix out;
  out.vertex_blocks = c.finite_vertices;
  std::map<std::string, std::size_t> vcol;
  for (std::size_t i = 0; i < c.finite_vertices.size(); ++i) vcol[c.finite_vertices[i]] = i * n;

  std::vector<std::pair<std::size_t, EdgeGeometry>> bounded;
  for (std::size_t i = 0; i < c.edges.size(); ++i)
    if (c.is_bounded(c.edges[i])) bounded.push_back({i, edge_geometry(p, c.edges[i], o)});

  std::map<std::string, std::size_t> ecol;
  std::size_t col = c.finite_vertices.size() * n;
  for (const auto& [i, g] : bounded) {
    out.edge_blocks.push_back(c.edges[i].id);
    if (g.slope) {
      out.edge_columns.push_back(c.edges[i].id);
      ecol[c.edges[i].id] = col++;
    }
  }

  std::vector<IntMatrix> projections;
  std::size_t rows = bounded.size() * n;
  if (spec.constraints)
    for (const auto& it : spec.constraints->items) {
      projections.push_back(quotient_projection(it.L));
      out.constraint_blocks.push_back(projections.back().rows());
      rows += projections.back().rows();
    }
  out.delta_row = spec.elliptic;
  if (spec.elliptic) ++rows;

  IntMatrix m(rows, col);
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const auto& [i, g] = bounded[k];
    const Edge& e = c.edges[i];
    const std::size_t r0 = k * n;
    if (!e.is_loop()) {
      for (std::size_t d = 0; d < n; ++d) {
        m(r0 + d, vcol.at(g.init) + d) -= 1;
        m(r0 + d, vcol.at(g.target) + d) += 1;
      }
    }
    if (g.slope) {
      const Int w = spec.variant == Variant::Beta ? g.multiplicity : Int(1);
      for (std::size_t d = 0; d < n; ++d) m(r0 + d, ecol.at(e.id)) = w * (*g.slope)[d];
    }
  }
  std::size_t r0 = bounded.size() * n;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const std::string attach = marked_attachment(c, i);
    const IntMatrix& q = projections[i];
    for (std::size_t r = 0; r < q.rows(); ++r)
      for (std::size_t d = 0; d < n; ++d) m(r0 + r, vcol.at(attach) + d) = q(r, d);
    r0 += q.rows();
  }
  // With n_e following the orientation, x_e·n_e is orientation-free, so every
  // cycle edge enters δ with coefficient +1.
  if (spec.elliptic)
    for (const auto& step : unique_cycle(c)) m(r0, ecol.at(c.edges[step.edge].id)) = 1;
  out.matrix = std::move(m);
  return out;
}

inline IntMatrix build_matrix(const ParamTropicalCurve& p, const ComplexSpec& spec) { return build_complex(p, spec).matrix; }

struct ComplexReport {
  IntMatrix matrix;
  std::size_t E1_rank = 0;
  Sublattice E1_lattice;
  FGAbelianGroup E2;
  std::size_t c_gamma = 0;
  CoeffGroup G;
  GroupSize E1_G;  // extension of Tor(E², G) by E¹ ⊗ G
  GroupSize E2_G;  // E² ⊗ G
};

inline ComplexReport compute(const ParamTropicalCurve& p, const ComplexSpec& spec, const CoeffGroup& g) {
  ComplexReport r;
  r.matrix = build_matrix(p, spec);
  r.E1_lattice = kernel_lattice(r.matrix);
  r.E1_rank = r.E1_lattice.rank();
  r.E2 = cokernel_group(r.matrix);
  r.c_gamma = zero_slope_bounded_count(p);
  r.G = g;
  const FGAbelianGroup e1{r.E1_rank, {}};
  r.E1_G = base_change(e1, g, BaseChangeMode::Tensor) + base_change(r.E2, g, BaseChangeMode::Tor);
  r.E2_G = base_change(r.E2, g, BaseChangeMode::Tensor);
  return r;
}

// The B-variant complex in quotient form ⊕_v N → ⊕_e N/N_e (⊕ N/L_i);
// quasi-isomorphic to the full B complex over ℤ.
inline IntMatrix quotient_form_matrix(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a) {
  const TropicalCurve& c = p.curve;
  ComplexSpec spec;
  spec.constraints = a;
  const Orientation o = default_orientation(c);
  detail::check_preconditions(p, spec, o);
  const std::size_t n = p.lattice_rank;
  std::map<std::string, std::size_t> vcol;
  for (std::size_t i = 0; i < c.finite_vertices.size(); ++i) vcol[c.finite_vertices[i]] = i * n;
  std::vector<IntVec> rows;
  auto add_block = [&](const IntMatrix& q, const std::string& v, int sign) {
    for (std::size_t r = 0; r < q.rows(); ++r) {
      IntVec row(c.finite_vertices.size() * n);
      for (std::size_t d = 0; d < n; ++d) row[vcol.at(v) + d] = sign * q(r, d);
      rows.push_back(row);
    }
  };
  for (const auto& e : c.edges) {
    if (!c.is_bounded(e)) continue;
    const EdgeGeometry g = edge_geometry(p, e, o);
    const IntMatrix q = g.slope ? quotient_projection(Sublattice::span(n, {*g.slope})) : IntMatrix::identity(n);
    if (e.is_loop()) {
      for (std::size_t r = 0; r < q.rows(); ++r) rows.push_back(IntVec(c.finite_vertices.size() * n));
      continue;
    }
    const std::size_t first = rows.size();
    add_block(q, g.target, 1);
    for (std::size_t r = 0; r < q.rows(); ++r)
      for (std::size_t d = 0; d < n; ++d) rows[first + r][vcol.at(g.init) + d] -= q(r, d);
  }
  if (a)
    for (std::size_t i = 0; i < a->items.size(); ++i) add_block(quotient_projection(a->items[i].L), marked_attachment(c, i), 1);
  return IntMatrix::from_rows(rows, c.finite_vertices.size() * n);
}

// ---------------------------------------------------------------------------
// Rank of the deformation space.

// c(Γ) + rank E¹(Γ)
inline std::size_t rank(const ParamTropicalCurve& p) {
  ComplexSpec spec;
  return zero_slope_bounded_count(p) + kernel_lattice(build_matrix(p, spec)).rank();
}

// (n − 3)χ + |E^∞| − ov + rank E², with χ = |V^f| − |E^b|.
inline std::int64_t rank_formula(const ParamTropicalCurve& p) {
  const TropicalCurve& c = p.curve;
  const std::int64_t n = static_cast<std::int64_t>(p.lattice_rank);
  const std::int64_t chi = static_cast<std::int64_t>(c.finite_vertices.size()) - static_cast<std::int64_t>(c.bounded_edge_count());
  const std::int64_t unbounded = static_cast<std::int64_t>(c.edges.size() - c.bounded_edge_count());
  ComplexSpec spec;
  const std::int64_t e2 = static_cast<std::int64_t>(cokernel_group(build_matrix(p, spec)).rank);
  return (n - 3) * chi + unbounded - overvalency(c) + e2;
}

// ---------------------------------------------------------------------------
// Regularity.

inline bool vanishes(const GroupSize& s) { return s.is_trivial(); }

struct RegularityVerdict {
  bool g_regular = false;
  std::optional<bool> elliptically_regular;
  GroupSize obstruction;                 // CE²_G(Γ[, A])
  std::optional<GroupSize> elliptic_obstruction;  // CE²_G(Γ, A, j)
  std::optional<bool> constraint_simple;
};

// A constrained pair counts as regular only when its constraint is simple.
inline RegularityVerdict regularity(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a, const CoeffGroup& g,
                                    bool elliptic) {
  RegularityVerdict v;
  ComplexSpec spec;
  spec.variant = Variant::Beta;
  spec.constraints = a;
  v.obstruction = compute(p, spec, g).E2_G;
  bool simple = true;
  if (a && !a->empty()) {
    simple = check_constraint(p, *a).simple;
    v.constraint_simple = simple;
  }
  v.g_regular = simple && vanishes(v.obstruction);
  if (elliptic) {
    spec.elliptic = true;
    v.elliptic_obstruction = compute(p, spec, g).E2_G;
    v.elliptically_regular = simple && vanishes(*v.elliptic_obstruction);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Exact-sequence ledgers over fields.

struct SixTermLedger {
  std::size_t mu = 0;    // ⊕ μ_{l(e)}(G)
  std::size_t ce1 = 0;   // CE¹_G
  std::size_t e1 = 0;    // E¹_G
  std::size_t quot = 0;  // ⊕ G/l(e)G
  std::size_t ce2 = 0;   // CE²_G
  std::size_t e2 = 0;    // E²_G

  std::int64_t alternating_sum() const {
    return static_cast<std::int64_t>(mu) - static_cast<std::int64_t>(ce1) + static_cast<std::int64_t>(e1) -
           static_cast<std::int64_t>(quot) + static_cast<std::int64_t>(ce2) - static_cast<std::int64_t>(e2);
  }
};

inline SixTermLedger six_term_check(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a, const CoeffGroup& g) {
  if (!g.is_field()) throw Error("NotAField", "six-term ledger needs a field, got " + g.name());
  ComplexSpec spec;
  spec.constraints = a;
  const ComplexReport e = compute(p, spec, g);
  spec.variant = Variant::Beta;
  const ComplexReport ce = compute(p, spec, g);
  SixTermLedger l;
  const std::uint64_t ch = g.field_characteristic();
  const Orientation o = default_orientation(p.curve);
  for (const auto& edge : p.curve.edges) {
    if (!p.curve.is_bounded(edge)) continue;
    const EdgeGeometry geo = edge_geometry(p, edge, o);
    if (geo.slope && ch != 0 && geo.multiplicity % ch == 0) {
      ++l.mu;  // μ_l(G) = G/lG = G when char | l
      ++l.quot;
    }
  }
  l.ce1 = ce.E1_G.kdim;
  l.e1 = e.E1_G.kdim;
  l.ce2 = ce.E2_G.kdim;
  l.e2 = e.E2_G.kdim;
  if (l.alternating_sum() != 0) throw Error("LedgerMismatch", "six-term alternating sum is " + std::to_string(l.alternating_sum()));
  return l;
}

// 0 → CE¹(A,j) → CE¹(A) → G → CE²(A,j) → CE²(A) → 0
struct EllipticLedger {
  std::size_t ce1_j = 0;
  std::size_t ce1 = 0;
  std::size_t ce2_j = 0;
  std::size_t ce2 = 0;

  std::int64_t alternating_sum() const {
    return static_cast<std::int64_t>(ce1_j) - static_cast<std::int64_t>(ce1) + 1 - static_cast<std::int64_t>(ce2_j) +
           static_cast<std::int64_t>(ce2);
  }
};

inline EllipticLedger elliptic_ledger(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a, const CoeffGroup& g) {
  if (!g.is_field()) throw Error("NotAField", "elliptic ledger needs a field, got " + g.name());
  ComplexSpec spec;
  spec.variant = Variant::Beta;
  spec.constraints = a;
  const ComplexReport plain = compute(p, spec, g);
  spec.elliptic = true;
  const ComplexReport with_j = compute(p, spec, g);
  return {with_j.E1_G.kdim, plain.E1_G.kdim, with_j.E2_G.kdim, plain.E2_G.kdim};
}

// ---------------------------------------------------------------------------
// Transport along subdivision and contraction.

struct TransportCheck {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct TransportReport {
  std::vector<TransportCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
};

namespace detail {

struct Groups {
  std::size_t e1_rank;
  FGAbelianGroup e2;
};

inline Groups groups(const ParamTropicalCurve& p, Variant v, const std::optional<AffineConstraintSet>& a, bool elliptic) {
  ComplexSpec spec;
  spec.variant = v;
  spec.constraints = a;
  spec.elliptic = elliptic;
  const IntMatrix m = build_matrix(p, spec);
  return {kernel_lattice(m).rank(), cokernel_group(m)};
}

inline std::string variant_name(Variant v, bool constrained, bool elliptic) {
  std::string s = v == Variant::B ? "E" : "CE";
  if (constrained) s += "(A)";
  if (elliptic) s += "(j)";
  return s;
}

inline bool elliptic_applicable(const ParamTropicalCurve& p) {
  if (genus(p.curve) != 1) return false;
  const Orientation o = default_orientation(p.curve);
  for (const auto& step : unique_cycle(p.curve))
    if (!edge_geometry(p, p.curve.edges[step.edge], o).slope) return false;
  return true;
}

// Verifies that `sub` arises from `p` by subdividing edges; returns the number
// of new vertices lying on edges of nonzero slope.
inline std::size_t subdivision_offset(const ParamTropicalCurve& p, const ParamTropicalCurve& sub) {
  const TropicalCurve& c = p.curve;
  const TropicalCurve& s = sub.curve;
  auto fail = [](const std::string& why) { return Error("NotASubdivision", why); };
  if (p.lattice_rank != sub.lattice_rank) throw fail("lattice ranks differ");
  if (c.infinite_vertices != s.infinite_vertices) throw fail("infinite vertices differ");
  for (const auto& v : c.infinite_vertices)
    if (p.at(v) != sub.at(v)) throw fail("h differs at '" + v + "'");
  for (const auto& v : c.finite_vertices) {
    if (!s.is_finite(v)) throw fail("vertex '" + v + "' missing");
    if (p.at(v) != sub.at(v)) throw fail("h differs at '" + v + "'");
  }
  require_balanced(sub);
  TropicalCurve smoothed = s;
  std::size_t offset = 0;
  const Orientation o = default_orientation(s);
  for (const auto& v : s.finite_vertices) {
    if (c.is_finite(v)) continue;
    const auto inc = s.incident_edges(v);
    if (inc.size() != 2 || s.valency(v) != 2) throw fail("new vertex '" + v + "' is not 2-valent");
    if (edge_geometry(sub, s.edges[inc[0]], o).slope) ++offset;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& v : smoothed.finite_vertices) {
      if (c.is_finite(v)) continue;
      const auto inc = smoothed.incident_edges(v);
      const Edge e1 = smoothed.edges[inc[0]];
      const Edge e2 = smoothed.edges[inc[1]];
      const EdgeLength len = (e1.length.is_infinite() || e2.length.is_infinite())
                                 ? EdgeLength::infinite()
                                 : EdgeLength::finite(e1.length.value() + e2.length.value());
      smoothed.edges[inc[0]] = {e1.id, e1.other(v), e2.other(v), len};
      smoothed.edges.erase(smoothed.edges.begin() + static_cast<std::ptrdiff_t>(inc[1]));
      smoothed.finite_vertices.erase(std::find(smoothed.finite_vertices.begin(), smoothed.finite_vertices.end(), v));
      changed = true;
      break;
    }
  }
  auto signature = [](const TropicalCurve& t) {
    std::multiset<std::string> sig;
    for (const auto& e : t.edges) sig.insert(std::min(e.a, e.b) + "|" + std::max(e.a, e.b) + "|" + e.length.to_string());
    return sig;
  };
  if (signature(smoothed) != signature(c)) throw fail("smoothing the new vertices does not recover the original edges");
  return offset;
}

}  // namespace detail

// Compares E, CE (and their constrained / elliptic versions where defined) of
// p and of a subdivision of p.
inline TransportReport subdivision_transport(const ParamTropicalCurve& p, const ParamTropicalCurve& sub,
                                             const std::optional<AffineConstraintSet>& a) {
  const std::size_t offset = detail::subdivision_offset(p, sub);
  TransportReport r;
  std::vector<std::pair<std::optional<AffineConstraintSet>, bool>> flavours{{std::nullopt, false}};
  if (a) flavours.push_back({a, false});
  if (detail::elliptic_applicable(p)) {
    flavours.push_back({std::nullopt, true});
    if (a) flavours.push_back({a, true});
  }
  for (const auto& [cons, elliptic] : flavours)
    for (const Variant v : {Variant::B, Variant::Beta}) {
      if (elliptic && v == Variant::B) continue;
      const detail::Groups before = detail::groups(p, v, cons, elliptic);
      const detail::Groups after = detail::groups(sub, v, cons, elliptic);
      const std::string name = detail::variant_name(v, cons.has_value(), elliptic);
      r.checks.push_back({name + "2 preserved", before.e2 == after.e2, before.e2.to_string() + " vs " + after.e2.to_string()});
      r.checks.push_back({name + "1 rank offset", after.e1_rank == before.e1_rank + offset,
                          std::to_string(before.e1_rank) + " + " + std::to_string(offset) + " vs " + std::to_string(after.e1_rank)});
    }
  return r;
}

// Compares p with its zero-slope contraction.
inline TransportReport contraction_transport(const ParamTropicalCurve& p, const std::optional<AffineConstraintSet>& a) {
  require_balanced(p);
  const Contraction q = contract_zero_slope(p);
  const std::int64_t g = genus(p.curve);
  const std::int64_t gbar = genus(q.curve.curve);
  const std::size_t shift = p.lattice_rank * static_cast<std::size_t>(g - gbar);
  TransportReport r;
  std::vector<std::pair<std::optional<AffineConstraintSet>, bool>> flavours{{std::nullopt, false}};
  if (a) flavours.push_back({a, false});
  if (g == 1 && gbar == 1 && detail::elliptic_applicable(p)) {
    flavours.push_back({std::nullopt, true});
    if (a) flavours.push_back({a, true});
  }
  for (const auto& [cons, elliptic] : flavours)
    for (const Variant v : {Variant::B, Variant::Beta}) {
      if (elliptic && v == Variant::B) continue;
      const detail::Groups full = detail::groups(p, v, cons, elliptic);
      const detail::Groups contracted = detail::groups(q.curve, v, cons, elliptic);
      const std::string name = detail::variant_name(v, cons.has_value(), elliptic);
      r.checks.push_back({name + "1 rank preserved", full.e1_rank == contracted.e1_rank,
                          std::to_string(contracted.e1_rank) + " vs " + std::to_string(full.e1_rank)});
      r.checks.push_back({name + "2 rank shift", full.e2.rank == contracted.e2.rank + shift,
                          std::to_string(contracted.e2.rank) + " + " + std::to_string(shift) + " vs " + std::to_string(full.e2.rank)});
      r.checks.push_back({name + "2 torsion preserved", full.e2.torsion == contracted.e2.torsion,
                          contracted.e2.to_string() + " vs " + full.e2.to_string()});
    }
  return r;
}

}  // namespace tropicorr
