#pragma once

// Cones in N_ℝ ⊕ ℝ attached to a parameterized curve and their refinement to a fan.

#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/paramcurve.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tropicorr {

// Generators are primitive and sorted; the empty list is the zero cone.
struct Cone {
  std::vector<IntVec> generators;

  std::size_t dim() const { return generators.size(); }
  auto operator<=>(const Cone&) const = default;
  bool operator==(const Cone&) const = default;
};

inline Cone make_cone(std::vector<IntVec> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return {std::move(gens)};
}

// Primitive integer vector on the ray through a nonzero rational vector.
inline IntVec primitive_ray(const RatVec& v) {
  const Int den = common_denominator(v);
  IntVec out;
  for (const auto& x : v) out.push_back(numerator(x * den));
  const Int g = content(out);
  if (g == 0) throw Error("ZeroVector", "a ray needs a nonzero generator");
  for (auto& x : out) x /= g;
  return out;
}

inline RatVec lift(const RatVec& h, const Rat& last) {
  RatVec out = h;
  out.push_back(last);
  return out;
}

// Ray of the image of a vertex: (h(v),1) for finite v, (h(v),0) for infinite v.
inline std::optional<IntVec> vertex_ray(const ParamTropicalCurve& p, const std::string& v) {
  const RatVec& h = p.at(v);
  if (p.curve.is_finite(v)) return primitive_ray(lift(h, Rat(1)));
  if (is_zero(h)) return std::nullopt;
  return primitive_ray(lift(h, Rat(0)));
}

// σ_e for an edge of nonzero slope.
inline std::optional<Cone> edge_cone(const ParamTropicalCurve& p, const Edge& e) {
  if (e.is_loop()) return std::nullopt;
  const auto a = vertex_ray(p, e.a);
  const auto b = vertex_ray(p, e.b);
  if (!a || !b || *a == *b) return std::nullopt;
  return make_cone({*a, *b});
}

// Deduplicated primitive directions of the nonzero ends.
inline std::vector<IntVec> fan_eta(const ParamTropicalCurve& p) {
  std::set<IntVec> rays;
  for (const auto& v : p.curve.infinite_vertices)
    if (!is_zero(p.at(v))) rays.insert(primitive_ray(p.at(v)));
  return {rays.begin(), rays.end()};
}

inline std::vector<Cone> build_K(const ParamTropicalCurve& p) {
  std::set<Cone> cones{Cone{}};
  for (const auto& v : p.curve.finite_vertices) cones.insert(make_cone({*vertex_ray(p, v)}));
  for (const auto& v : p.curve.infinite_vertices)
    if (const auto r = vertex_ray(p, v)) cones.insert(make_cone({*r}));
  for (const auto& e : p.curve.edges)
    if (const auto c = edge_cone(p, e)) cones.insert(*c);
  return {cones.begin(), cones.end()};
}

namespace detail {

// (s, t) with r = s·a + t·b, when r lies in span(a, b); a and b independent.
inline std::optional<std::pair<Rat, Rat>> plane_coordinates(const IntVec& a, const IntVec& b, const IntVec& r) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Int det = a[i] * b[j] - a[j] * b[i];
      if (det == 0) continue;
      const Rat s = make_rat(r[i] * b[j] - r[j] * b[i], det);
      const Rat t = make_rat(a[i] * r[j] - a[j] * r[i], det);
      for (std::size_t k = 0; k < n; ++k)
        if (s * Rat(a[k]) + t * Rat(b[k]) != Rat(r[k])) return std::nullopt;
      return std::make_pair(s, t);
    }
  return std::nullopt;
}

inline bool in_relative_interior(const Cone& c, const IntVec& r) {
  if (c.dim() != 2) return false;
  const auto st = plane_coordinates(c.generators[0], c.generators[1], r);
  return st && st->first > 0 && st->second > 0;
}

// The ray σ ∩ τ of two 2-cones whose spans meet in a line, if any.
inline std::optional<IntVec> transversal_intersection(const Cone& s, const Cone& t) {
  const std::size_t n = s.generators[0].size();
  IntMatrix m(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = s.generators[0][i];
    m(i, 1) = s.generators[1][i];
    m(i, 2) = -t.generators[0][i];
    m(i, 3) = -t.generators[1][i];
  }
  if (rank(m) != 3) return std::nullopt;
  const Sublattice k = kernel_lattice(m);
  IntVec coeff = k.basis().row(0);
  if (coeff[0] < 0 || coeff[1] < 0) coeff = Int(-1) * coeff;
  for (const auto& c : coeff)
    if (c < 0) return std::nullopt;
  RatVec x(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = Rat(coeff[0] * s.generators[0][i] + coeff[1] * s.generators[1][i]);
  return primitive_ray(x);
}

}  // namespace detail

// Rays sorted lexicographically; 2-cones as sorted index pairs.
struct FanModel {
  std::size_t ambient_rank = 0;  // n + 1
  std::vector<IntVec> rays;
  std::vector<std::pair<std::size_t, std::size_t>> cones;
  std::vector<bool> eta;  // last coordinate zero
  std::map<std::size_t, std::vector<std::string>> ray_vertices;  // filled by fan_model
  std::map<std::size_t, std::vector<std::string>> cone_edges;

  std::size_t ray_index(const IntVec& r) const {
    const auto it = std::lower_bound(rays.begin(), rays.end(), r);
    if (it == rays.end() || *it != r) throw Error("RayNotInFan", "ray is not in the fan");
    return static_cast<std::size_t>(it - rays.begin());
  }
  std::optional<std::size_t> cone_index(std::size_t i, std::size_t j) const {
    const auto key = std::minmax(i, j);
    const auto it = std::lower_bound(cones.begin(), cones.end(), std::make_pair(key.first, key.second));
    if (it == cones.end() || *it != std::make_pair(key.first, key.second)) return std::nullopt;
    return static_cast<std::size_t>(it - cones.begin());
  }
  // n_ρ: the primitive vector for η-rays, the point at height one otherwise.
  RatVec n_rho(std::size_t i) const {
    const IntVec& r = rays.at(i);
    RatVec out;
    const std::size_t n = r.size() - 1;
    for (std::size_t k = 0; k < n; ++k) out.push_back(eta[i] ? Rat(r[k]) : make_rat(r[k], r[n]));
    return out;
  }
  std::vector<Cone> cone_list() const {
    std::vector<Cone> out{Cone{}};
    for (const auto& r : rays) out.push_back(make_cone({r}));
    for (const auto& [i, j] : cones) out.push_back(make_cone({rays[i], rays[j]}));
    std::sort(out.begin(), out.end());
    return out;
  }
};

// The set W of one-dimensional intersections of cones of K.
inline std::vector<IntVec> intersection_rays(const std::vector<Cone>& K) {
  std::set<IntVec> w;
  std::vector<const Cone*> planes;
  for (const auto& c : K) {
    for (const auto& g : c.generators) w.insert(g);
    if (c.dim() == 2) planes.push_back(&c);
  }
  for (std::size_t i = 0; i < planes.size(); ++i)
    for (std::size_t j = i + 1; j < planes.size(); ++j)
      if (const auto r = detail::transversal_intersection(*planes[i], *planes[j])) w.insert(*r);
  return {w.begin(), w.end()};
}

// Splits every 2-cone at the rays of W in its relative interior.
inline FanModel refine_to_fan(const std::vector<Cone>& K) {
  FanModel fm;
  const std::vector<IntVec> w = intersection_rays(K);
  fm.rays = w;
  if (!w.empty()) fm.ambient_rank = w.front().size();
  for (const auto& r : fm.rays) fm.eta.push_back(r.back() == 0);
  std::set<std::pair<std::size_t, std::size_t>> cones;
  for (const auto& c : K) {
    if (c.dim() != 2) continue;
    const IntVec& a = c.generators[0];
    const IntVec& b = c.generators[1];
    // order interior rays by t/s in r = s·a + t·b
    std::vector<std::pair<Rat, std::size_t>> inner;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto st = detail::plane_coordinates(a, b, w[i]);
      if (st && st->first > 0 && st->second > 0) inner.push_back({st->second / st->first, i});
    }
    std::sort(inner.begin(), inner.end());
    std::vector<std::size_t> chain{fm.ray_index(a)};
    for (const auto& [ratio, i] : inner) chain.push_back(i);
    chain.push_back(fm.ray_index(b));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) cones.insert(std::minmax(chain[k], chain[k + 1]));
  }
  fm.cones.assign(cones.begin(), cones.end());
  return fm;
}

// Γ^tr: every edge of nonzero slope is cut where interior rays of Σ_Γ cross it.
inline ParamTropicalCurve gamma_tr(const ParamTropicalCurve& p) {
  require_balanced(p);
  const FanModel fm = refine_to_fan(build_K(p));
  std::vector<PositionedSubdivision> subs;
  for (const auto& e : p.curve.edges) {
    const auto c = edge_cone(p, e);
    if (!c) continue;
    PositionedSubdivision s{e.id, {}};
    for (std::size_t i = 0; i < fm.rays.size(); ++i)
      if (!fm.eta[i] && detail::in_relative_interior(*c, fm.rays[i])) s.points.push_back(fm.n_rho(i));
    if (!s.points.empty()) subs.push_back(std::move(s));
  }
  if (subs.empty()) return p;
  return lengths_from_positions(p, subs);
}

// Σ_Γ together with V_ρ and E_σ read off Γ^tr (p must already be refined).
inline FanModel fan_model_of_refined(const ParamTropicalCurve& p_tr) {
  FanModel fm = refine_to_fan(build_K(p_tr));
  for (const auto& v : p_tr.curve.finite_vertices) fm.ray_vertices[fm.ray_index(*vertex_ray(p_tr, v))].push_back(v);
  for (const auto& v : p_tr.curve.infinite_vertices)
    if (const auto r = vertex_ray(p_tr, v)) fm.ray_vertices[fm.ray_index(*r)].push_back(v);
  for (const auto& e : p_tr.curve.edges) {
    const auto c = edge_cone(p_tr, e);
    if (!c) continue;
    const auto idx = fm.cone_index(fm.ray_index(c->generators[0]), fm.ray_index(c->generators[1]));
    if (!idx) throw Error("NotRefined", "cone of edge '" + e.id + "' is not a cone of the fan");
    fm.cone_edges[*idx].push_back(e.id);
  }
  return fm;
}

inline FanModel fan_model(const ParamTropicalCurve& p) { return fan_model_of_refined(gamma_tr(p)); }

struct ConeMultiplicities {
  std::map<std::size_t, Int> rays;   // η-rays only: lcm of l(v) over V_ρ
  std::map<std::size_t, Int> cones;  // lcm of l(e) over E_σ
};

// l(v) of an infinite vertex is the multiplicity of its end.
inline Int vertex_multiplicity(const ParamTropicalCurve& p, const std::string& v) {
  if (p.curve.is_finite(v)) return 1;
  IntVec h;
  for (const auto& x : p.at(v)) h.push_back(numerator(x));
  return content(h);
}

inline ConeMultiplicities cone_multiplicities(const FanModel& fm, const ParamTropicalCurve& p_tr) {
  ConeMultiplicities out;
  for (const auto& [ray, verts] : fm.ray_vertices) {
    if (!fm.eta[ray]) continue;
    Int l = 1;
    for (const auto& v : verts) l = lcm(l, vertex_multiplicity(p_tr, v));
    out.rays[ray] = l;
  }
  for (const auto& [cone, edges] : fm.cone_edges) {
    Int l = 1;
    for (const auto& e : edges) l = lcm(l, edge_geometry(p_tr, e).multiplicity);
    out.cones[cone] = l;
  }
  return out;
}

struct Ramification {
  bool reduced = false;
  Int minimal_a = 1;            // clears denominators of positions and lengths
  Int minimal_a_positions = 1;  // least a with a·n_ρ integral for every non-η ray
};

inline Ramification ramification(const ParamTropicalCurve& p_tr, const Int& a) {
  if (a < 1) throw Error("BadRamification", "a must be a positive integer");
  Ramification r;
  for (const auto& v : p_tr.curve.finite_vertices)
    r.minimal_a_positions = lcm(r.minimal_a_positions, common_denominator(p_tr.at(v)));
  r.minimal_a = r.minimal_a_positions;
  for (const auto& e : p_tr.curve.edges)
    if (p_tr.curve.is_bounded(e)) r.minimal_a = lcm(r.minimal_a, denominator(e.length.value()));
  r.reduced = a % r.minimal_a == 0;
  return r;
}

struct Adjacency {
  std::vector<std::size_t> nodes;  // non-η rays
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline Adjacency component_adjacency(const FanModel& fm) {
  Adjacency adj;
  for (std::size_t i = 0; i < fm.rays.size(); ++i)
    if (!fm.eta[i]) adj.nodes.push_back(i);
  for (const auto& [i, j] : fm.cones)
    if (!fm.eta[i] && !fm.eta[j]) adj.edges.push_back({i, j});
  return adj;
}

// Rays of Star(ρ) in N_ℝ for a non-η ray ρ.
inline std::vector<IntVec> star_fan(const FanModel& fm, std::size_t ray) {
  if (ray >= fm.rays.size() || fm.eta[ray]) throw Error("RayNotInFan", "star needs a non-eta ray of the fan");
  std::set<IntVec> out;
  const RatVec base = fm.n_rho(ray);
  for (const auto& [i, j] : fm.cones) {
    if (i != ray && j != ray) continue;
    const std::size_t other = i == ray ? j : i;
    out.insert(primitive_ray(fm.eta[other] ? fm.n_rho(other) : fm.n_rho(other) - base));
  }
  return {out.begin(), out.end()};
}

// Rays of the subfan X_v: directions to the neighbours of v, zero ones dropped.
inline std::vector<IntVec> local_fan(const ParamTropicalCurve& p_tr, const std::string& v) {
  if (!p_tr.curve.is_finite(v)) throw Error("UnknownVertex", "'" + v + "' is not a finite vertex");
  std::set<IntVec> out;
  for (const auto i : p_tr.curve.incident_edges(v)) {
    const Edge& e = p_tr.curve.edges[i];
    if (e.is_loop()) continue;
    const std::string& w = e.other(v);
    const RatVec d = p_tr.curve.is_finite(w) ? p_tr.at(w) - p_tr.at(v) : p_tr.at(w);
    if (!is_zero(d)) out.insert(primitive_ray(d));
  }
  return {out.begin(), out.end()};
}

struct ReductionExponent {
  std::string special_point;  // id of the incident edge
  IntVec exponent;
};

// Exponents of the character on the component of v, one per incident edge.
inline std::vector<ReductionExponent> reduction_exponents(const ParamTropicalCurve& p_tr, const std::string& v) {
  if (!p_tr.curve.is_finite(v)) throw Error("UnknownVertex", "'" + v + "' is not a finite vertex");
  std::vector<ReductionExponent> out;
  for (const auto i : p_tr.curve.incident_edges(v)) {
    const Edge& e = p_tr.curve.edges[i];
    const std::string& w = e.other(v);
    RatVec d = p_tr.curve.is_finite(w) ? p_tr.at(w) - p_tr.at(v) : p_tr.at(w);
    if (p_tr.curve.is_bounded(e)) d = (Rat(1) / e.length.value()) * d;
    IntVec x;
    for (const auto& c : d) {
      if (!is_integral(c)) throw Error("NonIntegral", "exponent along '" + e.id + "' is not integral");
      x.push_back(numerator(c));
    }
    out.push_back({e.id, x});
  }
  return out;
}

}  // namespace tropicorr
