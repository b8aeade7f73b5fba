#pragma once

// Random balanced parameterized curves and constraints for property tests.

#include "tropicorr/complexes.hpp"
#include "tropicorr/paramcurve.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace corpus {

using namespace tropicorr;

struct Options {
  std::size_t n = 2;
  std::size_t max_vertices = 4;
  std::size_t max_extra_edges = 2;
  long coord_range = 3;
  long max_multiplicity = 3;
  bool zero_slope = true;
  bool loops = true;
};

struct Instance {
  ParamTropicalCurve p;
  AffineConstraintSet a;
};

inline long uniform(std::mt19937& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
inline bool coin(std::mt19937& rng, double prob = 0.5) { return std::bernoulli_distribution(prob)(rng); }

inline IntVec random_vector(std::mt19937& rng, std::size_t n, long range) {
  IntVec v(n);
  for (auto& x : v) x = uniform(rng, -range, range);
  return v;
}

inline IntVec nonzero_vector(std::mt19937& rng, std::size_t n, long range) {
  for (;;) {
    IntVec v = random_vector(rng, n, range);
    if (!is_zero(v)) return v;
  }
}

namespace detail {

inline Int vec_gcd(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline void add_bounded(ParamTropicalCurve& p, const std::string& id, const std::string& a, const std::string& b, std::mt19937& rng,
                        const Options& opt) {
  RatVec d = p.at(b) - p.at(a);
  IntVec di;
  for (const auto& x : d) di.push_back(numerator(x));
  const Int g = vec_gcd(di);
  EdgeLength len = EdgeLength::finite(Rat(uniform(rng, 1, 3), uniform(rng, 1, 2)));
  if (g != 0) len = EdgeLength::finite(make_rat(g, Int(uniform(rng, 1, opt.max_multiplicity))));
  p.curve.edges.push_back({id, a, b, len});
}

inline void add_end(ParamTropicalCurve& p, const std::string& v, const IntVec& dir, std::size_t& counter) {
  const std::string id = "x" + std::to_string(counter++);
  p.curve.infinite_vertices.push_back(id);
  p.h[id] = to_rat(dir);
  p.curve.edges.push_back({"u" + id, v, id, EdgeLength::infinite()});
}

// Adds ends so every finite vertex is balanced and at least 3-valent.
inline void close_up(ParamTropicalCurve& p, std::mt19937& rng, const Options& opt) {
  std::size_t counter = 0;
  for (const auto& v : p.curve.finite_vertices) {
    RatVec sum(p.lattice_rank, Rat(0));
    for (const auto i : p.curve.incident_edges(v)) {
      const Edge& e = p.curve.edges[i];
      if (e.is_loop()) continue;
      const RatVec diff = p.at(e.other(v)) - p.at(v);
      sum = sum + (Rat(1) / e.length.value()) * diff;
    }
    IntVec defect;
    for (const auto& x : sum) defect.push_back(-numerator(x));
    if (!is_zero(defect)) add_end(p, v, defect, counter);
    while (p.curve.valency(v) < 3) {
      const IntVec w = nonzero_vector(rng, p.lattice_rank, 2);
      IntVec neg;
      for (const auto& x : w) neg.push_back(-x);
      add_end(p, v, w, counter);
      add_end(p, v, neg, counter);
    }
  }
}

}  // namespace detail

// Connected balanced curve with integer vertex positions; every edge has integral
// slope by choosing |e| = gcd(h(b) − h(a))/l.
inline ParamTropicalCurve random_curve(std::mt19937& rng, const Options& opt = {}) {
  ParamTropicalCurve p;
  p.lattice_rank = opt.n;
  const std::size_t k = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(opt.max_vertices)));
  for (std::size_t i = 0; i < k; ++i) {
    const std::string id = "v" + std::to_string(i);
    p.curve.finite_vertices.push_back(id);
    for (;;) {
      p.h[id] = to_rat(random_vector(rng, opt.n, opt.coord_range));
      bool fresh = true;
      for (std::size_t j = 0; j < i; ++j) fresh = fresh && p.h[id] != p.h["v" + std::to_string(j)];
      if (fresh || opt.zero_slope) break;
    }
  }
  std::size_t e = 0;
  for (std::size_t i = 1; i < k; ++i) {
    const std::size_t j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(i) - 1));
    detail::add_bounded(p, "e" + std::to_string(e++), p.curve.finite_vertices[j], p.curve.finite_vertices[i], rng, opt);
  }
  const long extra = uniform(rng, 0, static_cast<long>(opt.max_extra_edges));
  for (long t = 0; t < extra; ++t) {
    const auto& fv = p.curve.finite_vertices;
    const std::string a = fv[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(k) - 1))];
    const std::string b = fv[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(k) - 1))];
    if (a == b && !opt.loops) continue;
    if (a != b && !opt.zero_slope && p.at(a) == p.at(b)) continue;
    detail::add_bounded(p, "e" + std::to_string(e++), a, b, rng, opt);
  }
  detail::close_up(p, rng, opt);
  return p;
}

// Trivalent balanced tree: three ends at the origin, then repeatedly an end of
// weighted direction d is cut at distance t and split into d₁ + d₂ = d.
inline ParamTropicalCurve random_trivalent_tree(std::mt19937& rng, std::size_t n, std::size_t splits, long range = 2) {
  ParamTropicalCurve p;
  p.lattice_rank = n;
  p.curve.finite_vertices.push_back("v0");
  p.h["v0"] = RatVec(n, Rat(0));
  std::size_t counter = 0;
  const IntVec d1 = nonzero_vector(rng, n, range);
  IntVec d2, d3;
  for (;;) {
    d2 = nonzero_vector(rng, n, range);
    d3 = IntVec(n);
    for (std::size_t i = 0; i < n; ++i) d3[i] = -d1[i] - d2[i];
    if (!is_zero(d3)) break;
  }
  for (const auto& d : {d1, d2, d3}) detail::add_end(p, "v0", d, counter);
  for (std::size_t s = 0; s < splits; ++s) {
    const std::size_t pick = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(p.curve.infinite_vertices.size()) - 1));
    const std::string inf = p.curve.infinite_vertices[pick];
    const IntVec d = [&] {
      IntVec v;
      for (const auto& x : p.at(inf)) v.push_back(numerator(x));
      return v;
    }();
    IntVec a, b(n);
    for (;;) {
      a = nonzero_vector(rng, n, range);
      for (std::size_t i = 0; i < n; ++i) b[i] = d[i] - a[i];
      if (!is_zero(b)) break;
    }
    Edge& end = p.curve.edges[p.curve.incident_edges(inf).front()];
    const std::string v = end.other(inf);
    const std::string w = "v" + std::to_string(p.curve.finite_vertices.size());
    const Rat t(uniform(rng, 1, 3), uniform(rng, 1, 2));
    p.curve.finite_vertices.push_back(w);
    p.h[w] = p.at(v) + t * to_rat(d);
    end = {"e" + std::to_string(s), v, w, EdgeLength::finite(t)};
    p.curve.infinite_vertices.erase(p.curve.infinite_vertices.begin() + static_cast<std::ptrdiff_t>(pick));
    p.h.erase(inf);
    detail::add_end(p, w, a, counter);
    detail::add_end(p, w, b, counter);
  }
  return p;
}

// Genus-one curve: a polygon of nonzero-slope edges with one end per corner.
inline ParamTropicalCurve random_cycle_curve(std::mt19937& rng, std::size_t n = 2, long max_multiplicity = 2) {
  Options opt;
  opt.n = n;
  opt.max_multiplicity = max_multiplicity;
  for (;;) {
    ParamTropicalCurve p;
    p.lattice_rank = n;
    const std::size_t k = static_cast<std::size_t>(uniform(rng, 2, 4));
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      const std::string id = "v" + std::to_string(i);
      p.curve.finite_vertices.push_back(id);
      p.h[id] = to_rat(random_vector(rng, n, 3));
      if (i > 0 && p.h[id] == p.h["v" + std::to_string(i - 1)]) ok = false;
    }
    if (!ok || p.h["v0"] == p.h["v" + std::to_string(k - 1)]) continue;
    for (std::size_t i = 0; i < k; ++i)
      detail::add_bounded(p, "c" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string((i + 1) % k), rng, opt);
    detail::close_up(p, rng, opt);
    return p;
  }
}

// Saturated sublattice of the given rank.
inline Sublattice random_saturated(std::mt19937& rng, std::size_t n, std::size_t r) {
  for (;;) {
    std::vector<IntVec> gens;
    for (std::size_t i = 0; i < r; ++i) gens.push_back(random_vector(rng, n, 2));
    const Sublattice l = saturation(Sublattice::span(n, gens));
    if (l.rank() == r) return l;
  }
}

// Attaches a marked end at a new vertex placed inside a nonzero-slope edge
// (or directly at a finite vertex) and returns the id of the attachment vertex.
inline std::string add_marked_point(ParamTropicalCurve& p, std::mt19937& rng, std::size_t slot, bool at_vertex = false) {
  std::vector<std::string> candidates;
  for (const auto& e : p.curve.edges) {
    if (e.is_loop()) continue;
    if (p.curve.is_infinite(e.a) || p.curve.is_infinite(e.b)) {
      const std::string inf = p.curve.is_infinite(e.a) ? e.a : e.b;
      if (is_zero(p.at(inf))) continue;
    } else if (!edge_geometry(p, e.id).slope) {
      continue;
    }
    candidates.push_back(e.id);
  }
  std::string attach;
  if (at_vertex || candidates.empty()) {
    attach = p.curve.finite_vertices[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(p.curve.finite_vertices.size()) - 1))];
  } else {
    const std::string eid = candidates[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(candidates.size()) - 1))];
    const Edge& e = p.curve.edge(eid);
    const long den = uniform(rng, 2, 4);
    if (p.curve.is_bounded(e)) {
      const Rat t = e.length.value() * Rat(uniform(rng, 1, den - 1), den);
      p = extend_parameterization(p, {SubdivideBounded{eid, {t}}});
    } else {
      p = extend_parameterization(p, {SubdivideUnbounded{eid, {Rat(uniform(rng, 1, 3), den)}}});
    }
    attach = eid + ".v1";
  }
  std::string id = "m" + std::to_string(slot);
  while (p.curve.has_vertex(id)) id += "'";
  p.curve.infinite_vertices.insert(p.curve.infinite_vertices.begin() + static_cast<std::ptrdiff_t>(slot), id);
  p.h[id] = RatVec(p.lattice_rank, Rat(0));
  p.curve.edges.push_back({"u" + id, attach, id, EdgeLength::infinite()});
  return attach;
}

// Constraint through the current position of the attachment vertex, shifted
// along L so the point itself is not always h(v).
inline AffineConstraint constraint_through(const ParamTropicalCurve& p, const std::string& attach, const Sublattice& L,
                                           std::mt19937& rng) {
  RatVec point = p.at(attach);
  for (std::size_t r = 0; r < L.rank(); ++r) {
    const Rat c(uniform(rng, -2, 2));
    for (std::size_t d = 0; d < p.lattice_rank; ++d) point[d] += c * Rat(L.basis()(r, d));
  }
  return {L, point};
}

// Adds marked points with constraints of corank ≥ 2 until codim A equals
// rank(Γ) − slack for the grown curve (each marked point on an edge raises
// rank by one). Stops one short when no constraint fits the remainder.
inline Instance rigid_instance(ParamTropicalCurve p, std::mt19937& rng, std::size_t slack = 0, double at_vertex_prob = 0.0) {
  Instance out;
  const std::size_t n = p.lattice_rank;
  std::vector<std::pair<std::string, Sublattice>> pending;
  std::size_t codim = 0;
  std::size_t slot = 0;
  for (std::size_t guard = 0; guard < 16; ++guard) {
    const std::size_t r = rank(p);
    if (r < codim + slack + 1) break;
    const std::size_t deficit = r - codim - slack;
    // a point on an edge nets n − 1, a corank-2 lattice nets 1
    const std::size_t c = (n == 2 || deficit >= n - 1) ? n : 2;
    const Sublattice L = c == n ? Sublattice(n) : random_saturated(rng, n, n - c);
    const std::string attach = add_marked_point(p, rng, slot++, coin(rng, at_vertex_prob));
    pending.push_back({attach, L});
    codim += c;
  }
  for (const auto& [attach, L] : pending) out.a.items.push_back(constraint_through(p, attach, L, rng));
  out.p = std::move(p);
  return out;
}

// Like rigid_instance, but a marked point is kept only when its constraint cuts
// the rational deformation space transversally, so the result is regular over
// ℚ whenever the deformation space reaches dimension `slack`.
inline Instance generic_rigid_instance(ParamTropicalCurve p, std::mt19937& rng, std::size_t slack = 0, std::size_t attempts = 12) {
  const std::size_t n = p.lattice_rank;
  auto deformations = [](const ParamTropicalCurve& q, const AffineConstraintSet& a) {
    ComplexSpec spec;
    if (!a.empty()) spec.constraints = a;
    return kernel_lattice(build_matrix(q, spec)).rank();
  };
  AffineConstraintSet a;
  std::size_t dim = deformations(p, a);
  while (dim > slack) {
    const std::size_t deficit = dim - slack;
    const std::size_t c = (n == 2 || deficit >= n - 1) ? n : 2;
    bool placed = false;
    for (std::size_t t = 0; t < attempts && !placed; ++t) {
      ParamTropicalCurve q = p;
      const std::string attach = add_marked_point(q, rng, a.items.size());
      const Sublattice L = c == n ? Sublattice(n) : random_saturated(rng, n, n - c);
      AffineConstraintSet b = a;
      b.items.push_back(constraint_through(q, attach, L, rng));
      const std::size_t next = deformations(q, b);
      if (next + c == dim + 1) {
        p = std::move(q);
        a = std::move(b);
        dim = next;
        placed = true;
      }
    }
    if (!placed) break;
  }
  return {std::move(p), std::move(a)};
}

}  // namespace corpus
