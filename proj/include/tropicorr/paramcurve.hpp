#pragma once

#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/tropgraph.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tropicorr {

// Tropical curve with a vertex map h into N_ℚ = ℚⁿ.
struct ParamTropicalCurve {
  TropicalCurve curve;
  std::size_t lattice_rank = 0;
  std::map<std::string, RatVec> h;

  const RatVec& at(const std::string& v) const {
    const auto it = h.find(v);
    if (it == h.end()) throw Error("InvalidCurve", "no position for vertex '" + v + "'");
    return it->second;
  }

  friend bool operator==(const ParamTropicalCurve&, const ParamTropicalCurve&) = default;
};

// Bounded edges map (init, target); loops are absent because ε nets to zero on them.
using Orientation = std::map<std::string, std::pair<std::string, std::string>>;

// Each bounded non-loop edge runs from the lexicographically smaller id to the larger.
inline Orientation default_orientation(const TropicalCurve& c) {
  Orientation o;
  for (const auto& e : c.edges) {
    if (!c.is_bounded(e) || e.is_loop()) continue;
    o[e.id] = e.a < e.b ? std::make_pair(e.a, e.b) : std::make_pair(e.b, e.a);
  }
  return o;
}

// (h(to) − h(from)) / |e| for bounded edges, h(v^∞) for unbounded ones
// (always read from the finite end).
inline RatVec edge_direction(const ParamTropicalCurve& p, const Edge& e, const std::string& from) {
  const TropicalCurve& c = p.curve;
  if (!c.is_bounded(e)) return p.at(c.is_infinite(e.a) ? e.a : e.b);
  const RatVec d = p.at(e.other(from)) - p.at(from);
  return Rat(1) / e.length.value() * d;
}

struct BalanceDefect {
  std::string vertex;
  RatVec defect;
};

struct BalanceReport {
  std::vector<BalanceDefect> defects;
  bool ok() const { return defects.empty(); }
};

// pre: underlying curve valid and h defined everywhere
inline BalanceReport check_balancing(const ParamTropicalCurve& p) {
  BalanceReport r;
  for (const auto& v : p.curve.finite_vertices) {
    RatVec sum(p.lattice_rank);
    for (const auto i : p.curve.incident_edges(v)) {
      const Edge& e = p.curve.edges[i];
      if (e.is_loop()) continue;
      sum = sum + edge_direction(p, e, v);
    }
    if (!is_zero(sum)) r.defects.push_back({v, sum});
  }
  return r;
}

// Full check of the curve, the vertex map, integrality and balancing.
inline ValidationReport validate(const ParamTropicalCurve& p) {
  ValidationReport r = validate(p.curve);
  if (!r.ok()) return r;
  auto add = [&r](std::string code, std::string detail) { r.violations.push_back({std::move(code), std::move(detail)}); };
  bool positions_ok = true;
  for (const auto* list : {&p.curve.finite_vertices, &p.curve.infinite_vertices})
    for (const auto& v : *list) {
      const auto it = p.h.find(v);
      if (it == p.h.end()) {
        add("missing-position", "vertex '" + v + "' has no h value");
        positions_ok = false;
      } else if (it->second.size() != p.lattice_rank) {
        add("dimension", "h('" + v + "') has " + std::to_string(it->second.size()) + " coordinates");
        positions_ok = false;
      }
    }
  for (const auto& [v, pos] : p.h)
    if (!p.curve.has_vertex(v)) add("unknown-vertex", "h given for unknown vertex '" + v + "'");
  if (!positions_ok) return r;
  for (const auto& v : p.curve.infinite_vertices)
    if (!is_integral(p.at(v))) add("non-integral", "h('" + v + "') is not a lattice point");
  for (const auto& e : p.curve.edges)
    if (p.curve.is_bounded(e) && !is_integral(edge_direction(p, e, e.a)))
      add("non-integral", "edge '" + e.id + "' has non-integral slope");
  for (const auto& d : check_balancing(p).defects) {
    std::string s;
    for (const auto& x : d.defect) s += (s.empty() ? "" : ",") + to_string(x);
    add("unbalanced", "vertex '" + d.vertex + "' has defect (" + s + ")");
  }
  return r;
}

inline void require_balanced(const ParamTropicalCurve& p) {
  const ValidationReport r = validate(p);
  if (r.ok()) return;
  const Violation& v = r.violations.front();
  throw Error(v.code == "unbalanced" ? "NotBalanced" : "InvalidCurve", v.code + " " + v.detail);
}

struct EdgeGeometry {
  std::optional<IntVec> slope;  // primitive generator n_e; nullopt for zero slope
  Int multiplicity;             // l(e); 0 exactly when the slope is zero
  bool oriented = false;        // whether n_e depends on an orientation (bounded non-loop edges)
  std::string init;             // n_e points from init towards target (finite end for unbounded edges)
  std::string target;
};

inline EdgeGeometry edge_geometry(const ParamTropicalCurve& p, const Edge& e, const Orientation& o) {
  const TropicalCurve& c = p.curve;
  EdgeGeometry g;
  if (e.is_loop()) {
    g.init = g.target = e.a;
    g.multiplicity = 0;
    return g;
  }
  if (c.is_bounded(e)) {
    const auto it = o.find(e.id);
    if (it == o.end()) throw Error("InvalidCurve", "orientation misses edge '" + e.id + "'");
    g.init = it->second.first;
    g.target = it->second.second;
    g.oriented = true;
  } else {
    g.init = c.is_finite(e.a) ? e.a : e.b;
    g.target = e.other(g.init);
  }
  const PrimitivePart pp = primitive_part(to_int(edge_direction(p, e, g.init)));
  g.multiplicity = pp.length;
  if (pp.length != 0) g.slope = pp.vector;
  return g;
}

inline EdgeGeometry edge_geometry(const ParamTropicalCurve& p, const std::string& edge_id) {
  return edge_geometry(p, p.curve.edge(edge_id), default_orientation(p.curve));
}

// Number of bounded edges with zero slope, c(Γ).
inline std::size_t zero_slope_bounded_count(const ParamTropicalCurve& p) {
  std::size_t k = 0;
  for (const auto& e : p.curve.edges)
    if (p.curve.is_bounded(e) && is_zero(edge_direction(p, e, e.a))) ++k;
  return k;
}

struct DegreeTerm {
  IntVec direction;  // primitive
  Int weight;
  friend bool operator==(const DegreeTerm&, const DegreeTerm&) = default;
};

// Sorted lexicographically by direction.
inline std::vector<DegreeTerm> degree(const ParamTropicalCurve& p) {
  std::map<IntVec, Int> acc;
  for (const auto& e : p.curve.edges) {
    if (p.curve.is_bounded(e)) continue;
    const PrimitivePart pp = primitive_part(to_int(edge_direction(p, e, e.a)));
    if (pp.length != 0) acc[pp.vector] += pp.length;
  }
  std::vector<DegreeTerm> out;
  for (auto& [dir, w] : acc) out.push_back({dir, w});
  return out;
}

// Overvalency Σ_{v ∈ V^f} (val(v) − 3); may be negative.
inline std::int64_t overvalency(const TropicalCurve& c) {
  std::int64_t ov = 0;
  for (const auto& v : c.finite_vertices) ov += static_cast<std::int64_t>(c.valency(v)) - 3;
  return ov;
}

// ---------------------------------------------------------------------------
// Transport of h along modifications.

inline ParamTropicalCurve extend_parameterization(const ParamTropicalCurve& p, const std::vector<ModifyStep>& steps) {
  ParamTropicalCurve out = p;
  for (const auto& step : steps) {
    const ModifyResult m = modify_traced(out.curve, {step});
    for (const auto& cv : m.created) {
      switch (cv.origin) {
        case CreatedVertex::Origin::OnBoundedEdge: {
          const Rat t = cv.distance / cv.edge_length.value();
          out.h[cv.id] = out.at(cv.from) + t * (out.at(cv.to) - out.at(cv.from));
          break;
        }
        case CreatedVertex::Origin::OnUnboundedEdge:
          out.h[cv.id] = out.at(cv.from) + cv.distance * out.at(cv.to);
          break;
        case CreatedVertex::Origin::TreeVertex:
          out.h[cv.id] = out.at(cv.from);
          break;
        case CreatedVertex::Origin::TreeLeaf:
          out.h[cv.id] = RatVec(out.lattice_rank);
          break;
      }
    }
    out.curve = m.curve;
  }
  return out;
}

// Piece lengths of an edge cut at fractions 0 = λ_0 < λ_1 < … (< λ_r = 1 for
// bounded edges): |e_k| = (λ_{k+1} − λ_k)|e|, or λ_{k+1} − λ_k on an
// unbounded edge whose last piece stays infinite.
inline std::vector<EdgeLength> piece_lengths(const EdgeLength& len, const std::vector<Rat>& lambdas) {
  if (lambdas.size() < 2 || lambdas.front() != 0) throw Error("BadSubdivision", "fractions must start at 0");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (lambdas[i] <= lambdas[i - 1]) throw Error("BadSubdivision", "fractions must increase strictly");
  std::vector<EdgeLength> out;
  if (len.is_infinite()) {
    for (std::size_t i = 1; i < lambdas.size(); ++i) out.push_back(EdgeLength::finite(lambdas[i] - lambdas[i - 1]));
    out.push_back(EdgeLength::infinite());
  } else {
    if (lambdas.back() != 1) throw Error("BadSubdivision", "fractions on a bounded edge must end at 1");
    for (std::size_t i = 1; i < lambdas.size(); ++i) out.push_back(EdgeLength::finite((lambdas[i] - lambdas[i - 1]) * len.value()));
  }
  return out;
}

// Cut points given by their images in N_ℚ.
struct PositionedSubdivision {
  std::string edge;
  std::vector<RatVec> points;
};

// Fraction λ with point = h(start) + λ·direction, where direction is
// h(end) − h(start) on bounded edges and h(v^∞) on unbounded ones.
inline Rat position_fraction(const RatVec& start, const RatVec& direction, const RatVec& point, const std::string& edge) {
  std::size_t i = 0;
  while (i < direction.size() && direction[i] == 0) ++i;
  if (i == direction.size()) throw Error("NonCollinear", "edge '" + edge + "' has zero slope");
  const Rat lambda = (point[i] - start[i]) / direction[i];
  if (start + lambda * direction != point) throw Error("NonCollinear", "point is off edge '" + edge + "'");
  return lambda;
}

// Subdivides at prescribed images; piece lengths are the unique ones making
// h piecewise linear with the original slope.
inline ParamTropicalCurve lengths_from_positions(const ParamTropicalCurve& p, const std::vector<PositionedSubdivision>& subs) {
  std::vector<ModifyStep> steps;
  for (const auto& s : subs) {
    const Edge& e = p.curve.edge(s.edge);
    const bool bounded = p.curve.is_bounded(e);
    const std::string start = bounded || p.curve.is_finite(e.a) ? e.a : e.b;
    const RatVec dir = bounded ? p.at(e.b) - p.at(e.a) : p.at(e.other(start));
    std::vector<Rat> lambdas;
    for (const auto& pt : s.points) {
      const Rat l = position_fraction(p.at(start), dir, pt, s.edge);
      if (l <= 0 || (bounded && l >= 1)) throw Error("NonCollinear", "point lies outside edge '" + s.edge + "'");
      lambdas.push_back(l);
    }
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<Rat> distances;
    for (const auto& l : lambdas) distances.push_back(bounded ? l * e.length.value() : l);
    if (bounded) {
      steps.emplace_back(SubdivideBounded{s.edge, distances});
    } else {
      steps.emplace_back(SubdivideUnbounded{s.edge, distances});
    }
  }
  return extend_parameterization(p, steps);
}

// ---------------------------------------------------------------------------
// Contraction of the zero-slope bounded subgraph.

struct Contraction {
  ParamTropicalCurve curve;
  std::map<std::string, std::string> quotient;  // every vertex of the input → its image
};

// Each component of the zero-slope subgraph collapses onto its first vertex
// in finite-vertex list order.
inline Contraction contract_zero_slope(const ParamTropicalCurve& p) {
  const TropicalCurve& c = p.curve;
  std::map<std::string, std::string> parent;
  for (const auto& v : c.finite_vertices) parent[v] = v;
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < c.finite_vertices.size(); ++i) order[c.finite_vertices[i]] = i;
  std::function<std::string(const std::string&)> find = [&](const std::string& v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  std::vector<bool> in_zero(c.edges.size(), false);
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const Edge& e = c.edges[i];
    if (!c.is_bounded(e) || !is_zero(edge_direction(p, e, e.a))) continue;
    in_zero[i] = true;
    std::string ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    if (order[rb] < order[ra]) std::swap(ra, rb);
    parent[rb] = ra;
  }
  Contraction out;
  out.curve.lattice_rank = p.lattice_rank;
  for (const auto& v : c.finite_vertices) {
    const std::string r = find(v);
    out.quotient[v] = r;
    if (r == v) {
      out.curve.curve.finite_vertices.push_back(v);
      out.curve.h[v] = p.at(v);
    }
  }
  for (const auto& v : c.infinite_vertices) {
    out.quotient[v] = v;
    out.curve.curve.infinite_vertices.push_back(v);
    out.curve.h[v] = p.at(v);
  }
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    if (in_zero[i]) continue;
    const Edge& e = c.edges[i];
    out.curve.curve.edges.push_back({e.id, out.quotient.at(e.a), out.quotient.at(e.b), e.length});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Affine constraints.

struct AffineConstraint {
  Sublattice L;  // saturated, corank ≥ 2
  RatVec point;  // a_i ∈ N_ℚ
};

struct AffineConstraintSet {
  std::vector<AffineConstraint> items;  // item i binds to the i-th infinite vertex

  std::size_t codim() const {
    std::size_t k = 0;
    for (const auto& it : items) k += it.L.corank();
    return k;
  }
  bool empty() const { return items.empty(); }
};

inline void validate_constraints(const AffineConstraintSet& a, std::size_t n) {
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const AffineConstraint& it = a.items[i];
    const std::string tag = "constraint " + std::to_string(i);
    if (it.L.ambient_rank() != n || it.point.size() != n) throw Error("BadConstraint", tag + " has wrong dimension");
    if (it.L.corank() < 2) throw Error("BadConstraint", tag + " has corank " + std::to_string(it.L.corank()) + " < 2");
    if (!is_saturated(it.L)) throw Error("BadConstraint", tag + " lattice is not saturated");
  }
}

struct ConstraintReport {
  bool satisfies = false;
  bool simple = false;
  std::size_t codim = 0;
  std::vector<std::string> issues;  // first reason per failed item
};

// Finite neighbour of the i-th infinite vertex.
inline std::string marked_attachment(const TropicalCurve& c, std::size_t i) {
  const std::string& v = c.infinite_vertices.at(i);
  const auto inc = c.incident_edges(v);
  if (inc.size() != 1) throw Error("InvalidCurve", "infinite vertex '" + v + "' must have valency one");
  return c.edges[inc.front()].other(v);
}

inline ConstraintReport check_constraint(const ParamTropicalCurve& p, const AffineConstraintSet& a) {
  const TropicalCurve& c = p.curve;
  if (a.items.size() > c.infinite_vertices.size())
    throw Error("ConstraintCountMismatch", std::to_string(a.items.size()) + " constraints but only " +
                                               std::to_string(c.infinite_vertices.size()) + " infinite vertices");
  validate_constraints(a, p.lattice_rank);
  ConstraintReport r;
  r.codim = a.codim();
  r.satisfies = true;
  bool simple = true;
  const Orientation o = default_orientation(c);
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    const AffineConstraint& it = a.items[i];
    const std::string& marked = c.infinite_vertices[i];
    const std::string attach = marked_attachment(c, i);
    const std::string tag = "constraint " + std::to_string(i) + " at '" + attach + "': ";
    if (!is_zero(p.at(marked))) {
      r.satisfies = false;
      r.issues.push_back(tag + "infinite vertex '" + marked + "' is not a marked point");
    } else if (!it.L.contains_rational(p.at(attach) - it.point)) {
      r.satisfies = false;
      r.issues.push_back(tag + "position is off the affine space");
    }
    if (c.valency(attach) != 3) {
      simple = false;
      r.issues.push_back(tag + "vertex is not trivalent");
      continue;
    }
    // By balancing the other two edges share their slope lattice, so testing
    // each of them is the same as testing the bounded one.
    for (const auto idx : c.incident_edges(attach)) {
      const Edge& e = c.edges[idx];
      if (e.touches(marked)) continue;
      const EdgeGeometry g = edge_geometry(p, e, o);
      if (!g.slope) {
        simple = false;
        r.issues.push_back(tag + "edge '" + e.id + "' has zero slope");
        break;
      }
      if (it.L.contains_rational(to_rat(*g.slope))) {
        simple = false;
        r.issues.push_back(tag + "slope of edge '" + e.id + "' meets L");
        break;
      }
    }
  }
  r.simple = r.satisfies && simple;
  return r;
}

// ---------------------------------------------------------------------------
// Genus one.

// Edge indices of the unique simple cycle of a genus-one curve, in traversal
// order, each with the vertex it is entered from.
struct CycleStep {
  std::size_t edge;
  std::string from;
};

inline std::vector<CycleStep> unique_cycle(const TropicalCurve& c) {
  if (genus(c) != 1) throw Error("GenusNotOne", "genus is " + std::to_string(genus(c)));
  std::vector<bool> alive(c.edges.size(), true);
  std::map<std::string, std::size_t> deg;
  for (const auto& e : c.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
      if (!alive[i]) continue;
      const Edge& e = c.edges[i];
      if (e.is_loop() || (deg[e.a] != 1 && deg[e.b] != 1)) continue;
      alive[i] = false;
      --deg[e.a];
      --deg[e.b];
      changed = true;
    }
  }
  std::size_t start = 0;
  while (!alive[start]) ++start;
  std::vector<CycleStep> cycle;
  std::string at = c.edges[start].a;
  std::size_t cur = start;
  for (;;) {
    cycle.push_back({cur, at});
    alive[cur] = false;
    at = c.edges[cur].other(at);
    std::optional<std::size_t> next;
    for (std::size_t i = 0; i < c.edges.size(); ++i)
      if (alive[i] && c.edges[i].touches(at)) next = i;
    if (!next) break;
    cur = *next;
  }
  return cycle;
}

// Length of the unique cycle of a genus-one curve.
inline Rat tropical_j(const ParamTropicalCurve& p) {
  Rat total = 0;
  for (const auto& step : unique_cycle(p.curve)) total += p.curve.edges[step.edge].length.value();
  return total;
}

// ---------------------------------------------------------------------------
// Stabilization.

// Balancing forces a pruned leaf edge to have zero slope and the two edges at
// a 2-valent vertex to share their slope, so positions restrict unchanged.
inline ParamTropicalCurve stabilize(const ParamTropicalCurve& p) {
  require_balanced(p);
  ParamTropicalCurve out;
  out.lattice_rank = p.lattice_rank;
  out.curve = stabilize(p.curve);
  for (const auto& v : out.curve.finite_vertices) out.h[v] = p.at(v);
  for (const auto& v : out.curve.infinite_vertices) out.h[v] = p.at(v);
  return out;
}

}  // namespace tropicorr
