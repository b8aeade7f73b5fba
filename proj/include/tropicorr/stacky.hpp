#pragma once

// Stacky sublattices N′_σ ⊆ N_σ on the fan of Γ^tr.
//
// The lattice N ⊕ aℤ is identified with ℤ^{n+1} through (x, t) ↦ (x, t/a), so
// a non-η ray (n_ρ, 1) has lattice generator (a·n_ρ, 1).

#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/fanmodel.hpp"
#include "tropicorr/paramcurve.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tropicorr {

struct StackySigma {
  FanModel fan;
  Int a = 1;
  std::map<std::size_t, Sublattice> ray_lattice;   // N′_ρ
  std::map<std::size_t, Sublattice> cone_lattice;  // N′_σ, keyed by cone index
  std::map<std::size_t, Int> ray_order;            // |N_ρ/N′_ρ|
  std::map<std::size_t, Int> cone_order;           // |N_σ/N′_σ|

  // Primitive lattice generator of ray i in scaled coordinates.
  IntVec ray_generator(std::size_t i) const {
    if (fan.eta[i]) return fan.rays[i];
    IntVec out;
    for (const auto& x : fan.n_rho(i)) {
      const Rat y = x * Rat(a);
      if (!is_integral(y)) throw Error("NotReduced", "a·n_rho is not integral; increase a");
      out.push_back(numerator(y));
    }
    out.push_back(1);
    return out;
  }
  // N_σ: the saturated lattice spanned by σ.
  Sublattice cone_span(std::size_t c) const {
    const auto [i, j] = fan.cones.at(c);
    return saturation(Sublattice::span(fan.ambient_rank, {ray_generator(i), ray_generator(j)}));
  }
  Sublattice ray_span(std::size_t i) const { return Sublattice::span(fan.ambient_rank, {ray_generator(i)}); }
};

inline StackySigma stacky_data(const ParamTropicalCurve& p_tr, const Int& a) {
  const Ramification ram = ramification(p_tr, a);
  if (!ram.reduced)
    throw Error("NotReduced", "a = " + a.str() + " is not a multiple of the minimal ramification " + ram.minimal_a.str());
  StackySigma s;
  s.a = a;
  s.fan = fan_model_of_refined(p_tr);
  const FanModel& fm = s.fan;
  const std::size_t dim = fm.ambient_rank;
  const ConeMultiplicities mult = cone_multiplicities(fm, p_tr);

  for (std::size_t i = 0; i < fm.rays.size(); ++i) {
    const IntVec g = s.ray_generator(i);
    if (fm.eta[i]) {
      const Int l = mult.rays.count(i) ? mult.rays.at(i) : Int(1);
      s.ray_lattice[i] = Sublattice::span(dim, {l * g});
    } else {
      s.ray_lattice[i] = Sublattice::span(dim, {g});
    }
    s.ray_order[i] = index(s.ray_span(i), s.ray_lattice[i]);
  }
  for (std::size_t c = 0; c < fm.cones.size(); ++c) {
    const auto [i, j] = fm.cones[c];
    if (fm.eta[i] || fm.eta[j]) {
      s.cone_lattice[c] = lattice_sum(s.ray_lattice[i], s.ray_lattice[j]);
    } else {
      const Int l = mult.cones.count(c) ? mult.cones.at(c) : Int(1);
      const IntVec g1 = s.ray_generator(i);
      const IntVec g2 = s.ray_generator(j);
      IntVec diff;
      for (std::size_t k = 0; k + 1 < dim; ++k) diff.push_back(g2[k] - g1[k]);
      const PrimitivePart pp = primitive_part(diff);
      if (pp.length % l != 0)
        throw Error("DivisibilityViolated", "integral length " + pp.length.str() + " of a(n2 − n1) is not divisible by l(sigma) = " + l.str());
      IntVec edge_gen = l * pp.vector;
      edge_gen.push_back(0);
      s.cone_lattice[c] = Sublattice::span(dim, {g1, edge_gen});
    }
    s.cone_order[c] = index(s.cone_span(c), s.cone_lattice[c]);
  }
  return s;
}

// N′_σ ∩ span(ρ) = N′_ρ for every facet ρ of every 2-cone; since two distinct
// cones of a fan meet in a common face, this is the full compatibility condition.
inline bool compatible(const StackySigma& s) {
  for (std::size_t c = 0; c < s.fan.cones.size(); ++c) {
    const auto [i, j] = s.fan.cones[c];
    for (const std::size_t r : {i, j})
      if (intersect(s.cone_lattice.at(c), s.ray_span(r)) != s.ray_lattice.at(r)) return false;
  }
  return true;
}

// Condition on Γ^st: char_p divides no l(e) over edges of nonzero slope. Edges
// of nonzero slope survive stabilization with their multiplicities.
inline bool is_dm(const ParamTropicalCurve& p, std::uint64_t char_p) {
  require_balanced(p);
  if (char_p == 0) return true;
  if (!is_prime(char_p)) throw Error("BadCharacteristic", "characteristic must be 0 or prime, got " + std::to_string(char_p));
  for (const auto& e : p.curve.edges) {
    const Int l = edge_geometry(p, e.id).multiplicity;
    if (l != 0 && l % char_p == 0) return false;
  }
  return true;
}

struct NodeStackData {
  std::map<std::string, Int> edge_orders;    // |G_e| = l(σ_e)/l(e) per bounded edge
  std::map<std::string, Int> vertex_orders;  // |G_v| = l(ρ)/l(v) per end on an η-ray
};

inline NodeStackData node_stack(const ParamTropicalCurve& p_tr) {
  const FanModel fm = fan_model_of_refined(p_tr);
  const ConeMultiplicities mult = cone_multiplicities(fm, p_tr);
  NodeStackData out;
  for (const auto& [cone, edges] : fm.cone_edges)
    for (const auto& e : edges)
      if (p_tr.curve.is_bounded(p_tr.curve.edge(e))) out.edge_orders[e] = mult.cones.at(cone) / edge_geometry(p_tr, e).multiplicity;
  for (const auto& [ray, verts] : fm.ray_vertices) {
    if (!fm.eta[ray]) continue;
    for (const auto& v : verts) out.vertex_orders[v] = mult.rays.at(ray) / vertex_multiplicity(p_tr, v);
  }
  return out;
}

}  // namespace tropicorr
