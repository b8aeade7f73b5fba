#pragma once

#include "tropicorr/error.hpp"
#include "tropicorr/exactla/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tropicorr {

class EdgeLength {
 public:
  enum class Kind { Finite, Infinite };

  static EdgeLength finite(Rat value) { return EdgeLength(Kind::Finite, std::move(value)); }
  static EdgeLength infinite() { return EdgeLength(Kind::Infinite, Rat(0)); }

  EdgeLength() = default;
  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  // pre: !is_infinite()
  const Rat& value() const { return value_; }

  std::string to_string() const { return is_infinite() ? "inf" : tropicorr::to_string(value_); }

  friend bool operator==(const EdgeLength&, const EdgeLength&) = default;

 private:
  EdgeLength(Kind k, Rat v) : kind_(k), value_(std::move(v)) {}
  Kind kind_ = Kind::Finite;
  Rat value_ = 0;
};

struct Edge {
  std::string id;
  std::string a;  // for unbounded edges this is normally the finite end
  std::string b;
  EdgeLength length;

  bool is_loop() const { return a == b; }
  bool touches(const std::string& v) const { return a == v || b == v; }
  // pre: touches(v)
  const std::string& other(const std::string& v) const { return a == v ? b : a; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Finite connected metric graph; infinite vertices are ordered by list
// position and that order is semantically significant.
struct TropicalCurve {
  std::vector<std::string> finite_vertices;
  std::vector<std::string> infinite_vertices;
  std::vector<Edge> edges;

  bool is_finite(const std::string& v) const {
    return std::find(finite_vertices.begin(), finite_vertices.end(), v) != finite_vertices.end();
  }
  bool is_infinite(const std::string& v) const {
    return std::find(infinite_vertices.begin(), infinite_vertices.end(), v) != infinite_vertices.end();
  }
  bool has_vertex(const std::string& v) const { return is_finite(v) || is_infinite(v); }

  std::optional<std::size_t> edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return i;
    return std::nullopt;
  }
  const Edge& edge(const std::string& id) const {
    const auto i = edge_index(id);
    if (!i) throw Error("UnknownEdge", "no edge '" + id + "'");
    return edges[*i];
  }

  bool is_bounded(const Edge& e) const { return is_finite(e.a) && is_finite(e.b); }

  // A loop counts twice.
  std::size_t valency(const std::string& v) const {
    std::size_t k = 0;
    for (const auto& e : edges) k += static_cast<std::size_t>(e.a == v) + static_cast<std::size_t>(e.b == v);
    return k;
  }

  std::vector<std::size_t> incident_edges(const std::string& v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].touches(v)) out.push_back(i);
    return out;
  }

  std::size_t vertex_count() const { return finite_vertices.size() + infinite_vertices.size(); }

  std::size_t bounded_edge_count() const {
    std::size_t k = 0;
    for (const auto& e : edges) k += is_bounded(e) ? 1 : 0;
    return k;
  }

  friend bool operator==(const TropicalCurve&, const TropicalCurve&) = default;
};

struct Violation {
  std::string code;  // "infinite-vertex", "edge-length", "disconnected", "duplicate-id", "unknown-vertex", "empty"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool connected(const TropicalCurve& c) {
  std::vector<std::string> all = c.finite_vertices;
  all.insert(all.end(), c.infinite_vertices.begin(), c.infinite_vertices.end());
  if (all.empty()) return true;
  std::set<std::string> seen{all.front()};
  std::vector<std::string> stack{all.front()};
  while (!stack.empty()) {
    const std::string v = stack.back();
    stack.pop_back();
    for (const auto& e : c.edges) {
      if (!e.touches(v)) continue;
      const std::string& w = e.other(v);
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return seen.size() == all.size();
}

}  // namespace detail

inline ValidationReport validate(const TropicalCurve& c) {
  ValidationReport r;
  auto add = [&r](std::string code, std::string detail) { r.violations.push_back({std::move(code), std::move(detail)}); };

  if (c.vertex_count() == 0) add("empty", "curve has no vertices");
  std::set<std::string> ids;
  for (const auto& v : c.finite_vertices)
    if (!ids.insert(v).second) add("duplicate-id", "vertex '" + v + "' listed twice");
  for (const auto& v : c.infinite_vertices)
    if (!ids.insert(v).second) add("duplicate-id", "vertex '" + v + "' listed twice");
  std::set<std::string> edge_ids;
  for (const auto& e : c.edges)
    if (!edge_ids.insert(e.id).second) add("duplicate-id", "edge '" + e.id + "' listed twice");

  bool endpoints_ok = true;
  for (const auto& e : c.edges) {
    for (const auto* end : {&e.a, &e.b})
      if (!c.has_vertex(*end)) {
        add("unknown-vertex", "edge '" + e.id + "' ends at unknown vertex '" + *end + "'");
        endpoints_ok = false;
      }
  }
  if (!endpoints_ok) return r;

  for (const auto& v : c.infinite_vertices) {
    const std::size_t val = c.valency(v);
    if (val != 1) add("infinite-vertex", "infinite vertex '" + v + "' has valency " + std::to_string(val));
  }
  for (const auto& e : c.edges) {
    const bool ia = c.is_infinite(e.a);
    const bool ib = c.is_infinite(e.b);
    if (ia && ib) {
      add("infinite-vertex", "edge '" + e.id + "' joins two infinite vertices");
    } else if (ia || ib) {
      if (!e.length.is_infinite()) add("edge-length", "unbounded edge '" + e.id + "' must have length inf");
    } else if (e.length.is_infinite()) {
      add("edge-length", "bounded edge '" + e.id + "' has infinite length");
    } else if (e.length.value() <= 0) {
      add("edge-length", "bounded edge '" + e.id + "' has non-positive length " + e.length.to_string());
    }
  }
  if (!detail::connected(c)) add("disconnected", "curve is not connected");
  return r;
}

inline void require_valid(const TropicalCurve& c) {
  const ValidationReport r = validate(c);
  if (!r.ok()) throw Error("InvalidCurve", r.violations.front().code + " " + r.violations.front().detail);
}

// 1 − |V| + |E|
inline std::int64_t genus(const TropicalCurve& c) {
  return 1 - static_cast<std::int64_t>(c.vertex_count()) + static_cast<std::int64_t>(c.edges.size());
}

// ---------------------------------------------------------------------------
// Modification: subdivision of bounded and unbounded edges, tree attachment.

// Distances are measured from edge.a and must lie strictly inside (0, |e|).
struct SubdivideBounded {
  std::string edge;
  std::vector<Rat> distances;
};

// Distances are measured from the finite end and must be positive.
struct SubdivideUnbounded {
  std::string edge;
  std::vector<Rat> distances;
};

// tree_root (a finite vertex of `tree`) is glued onto `root`.
struct TreeAttachment {
  std::string root;
  TropicalCurve tree;
  std::string tree_root;
};

using ModifyStep = std::variant<SubdivideBounded, SubdivideUnbounded, TreeAttachment>;

// Provenance of a vertex created by a modification step.
struct CreatedVertex {
  enum class Origin { OnBoundedEdge, OnUnboundedEdge, TreeVertex, TreeLeaf };
  std::string id;
  Origin origin;
  std::string from;  // edge start (subdivisions) or glue vertex (trees)
  std::string to;    // far end of the subdivided edge; empty for trees
  Rat distance;      // distance from `from` along the original edge
  EdgeLength edge_length;  // length of the original edge
};

struct ModifyResult {
  TropicalCurve curve;
  std::vector<CreatedVertex> created;
};

namespace detail {

inline void check_fresh(const TropicalCurve& c, const std::string& id, const char* code) {
  if (c.has_vertex(id) || c.edge_index(id)) throw Error(code, "identifier '" + id + "' already in use");
}

inline void check_increasing(const std::vector<Rat>& d, const std::optional<Rat>& upper, const std::string& edge) {
  if (d.empty()) throw Error("BadSubdivision", "no subdivision points for edge '" + edge + "'");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] <= 0) throw Error("BadSubdivision", "distance " + to_string(d[i]) + " not positive on edge '" + edge + "'");
    if (i > 0 && d[i] <= d[i - 1]) throw Error("BadSubdivision", "distances not strictly increasing on edge '" + edge + "'");
    if (upper && d[i] >= *upper)
      throw Error("BadSubdivision", "distance " + to_string(d[i]) + " outside edge '" + edge + "' of length " + to_string(*upper));
  }
}

// Replaces edge `idx` by a chain start → s_1 → … → s_r → end.
inline void subdivide(ModifyResult& out, std::size_t idx, const std::string& start, const std::vector<Rat>& distances,
                      CreatedVertex::Origin origin) {
  TropicalCurve& c = out.curve;
  const Edge old = c.edges[idx];
  const std::string end = old.other(start);
  std::vector<std::string> verts{start};
  for (std::size_t k = 1; k <= distances.size(); ++k) {
    const std::string v = old.id + ".v" + std::to_string(k);
    check_fresh(c, v, "BadSubdivision");
    verts.push_back(v);
  }
  verts.push_back(end);
  std::vector<Edge> chain;
  for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
    const std::string id = old.id + "." + std::to_string(k);
    check_fresh(c, id, "BadSubdivision");
    EdgeLength len;
    if (k + 2 == verts.size()) {
      len = old.length.is_infinite() ? EdgeLength::infinite() : EdgeLength::finite(old.length.value() - distances.back());
    } else {
      len = EdgeLength::finite(distances[k] - (k ? distances[k - 1] : Rat(0)));
    }
    chain.push_back({id, verts[k], verts[k + 1], len});
  }
  for (std::size_t k = 1; k + 1 < verts.size(); ++k) {
    c.finite_vertices.push_back(verts[k]);
    out.created.push_back({verts[k], origin, start, end, distances[k - 1], old.length});
  }
  c.edges.erase(c.edges.begin() + static_cast<std::ptrdiff_t>(idx));
  c.edges.insert(c.edges.begin() + static_cast<std::ptrdiff_t>(idx), chain.begin(), chain.end());
}

inline void apply(ModifyResult& out, const SubdivideBounded& s) {
  const auto idx = out.curve.edge_index(s.edge);
  if (!idx) throw Error("BadSubdivision", "no edge '" + s.edge + "'");
  const Edge e = out.curve.edges[*idx];
  if (!out.curve.is_bounded(e)) throw Error("BadSubdivision", "edge '" + s.edge + "' is unbounded");
  check_increasing(s.distances, e.length.value(), s.edge);
  subdivide(out, *idx, e.a, s.distances, CreatedVertex::Origin::OnBoundedEdge);
}

inline void apply(ModifyResult& out, const SubdivideUnbounded& s) {
  const auto idx = out.curve.edge_index(s.edge);
  if (!idx) throw Error("BadSubdivision", "no edge '" + s.edge + "'");
  const Edge e = out.curve.edges[*idx];
  if (out.curve.is_bounded(e)) throw Error("BadSubdivision", "edge '" + s.edge + "' is bounded");
  check_increasing(s.distances, std::nullopt, s.edge);
  const std::string& start = out.curve.is_finite(e.a) ? e.a : e.b;
  subdivide(out, *idx, start, s.distances, CreatedVertex::Origin::OnUnboundedEdge);
}

inline void apply(ModifyResult& out, const TreeAttachment& t) {
  TropicalCurve& c = out.curve;
  if (!c.is_finite(t.root)) throw Error("BadAttachment", "root '" + t.root + "' is not a finite vertex");
  const ValidationReport tr = validate(t.tree);
  if (!tr.ok()) throw Error("BadAttachment", "tree invalid: " + tr.violations.front().detail);
  if (genus(t.tree) != 0) throw Error("BadAttachment", "attached graph is not a tree");
  if (!t.tree.is_finite(t.tree_root)) throw Error("BadAttachment", "tree root '" + t.tree_root + "' is not finite");
  auto rename = [&](const std::string& v) { return v == t.tree_root ? t.root : v; };
  for (const auto& v : t.tree.finite_vertices) {
    if (v == t.tree_root) continue;
    check_fresh(c, v, "BadAttachment");
    c.finite_vertices.push_back(v);
    out.created.push_back({v, CreatedVertex::Origin::TreeVertex, t.root, "", 0, EdgeLength::finite(0)});
  }
  for (const auto& v : t.tree.infinite_vertices) {
    check_fresh(c, v, "BadAttachment");
    c.infinite_vertices.push_back(v);
    out.created.push_back({v, CreatedVertex::Origin::TreeLeaf, t.root, "", 0, EdgeLength::infinite()});
  }
  for (const auto& e : t.tree.edges) {
    check_fresh(c, e.id, "BadAttachment");
    c.edges.push_back({e.id, rename(e.a), rename(e.b), e.length});
  }
}

}  // namespace detail

inline ModifyResult modify_traced(const TropicalCurve& c, const std::vector<ModifyStep>& steps) {
  ModifyResult out{c, {}};
  for (const auto& step : steps) std::visit([&out](const auto& s) { detail::apply(out, s); }, step);
  return out;
}

inline TropicalCurve modify(const TropicalCurve& c, const std::vector<ModifyStep>& steps) {
  return modify_traced(c, steps).curve;
}

// ---------------------------------------------------------------------------
// Stabilization.

// Condition g + (|V^∞| + 1)/2 ≥ 2, i.e. 2g + |V^∞| ≥ 3.
inline bool stabilizable(const TropicalCurve& c) {
  return 2 * genus(c) + static_cast<std::int64_t>(c.infinite_vertices.size()) >= 3;
}

inline bool is_stable(const TropicalCurve& c) {
  for (const auto& v : c.finite_vertices)
    if (c.valency(v) < 3) return false;
  return true;
}

namespace detail {

inline void erase_vertex(TropicalCurve& c, const std::string& v) {
  c.finite_vertices.erase(std::find(c.finite_vertices.begin(), c.finite_vertices.end(), v));
}

// Removes one finite leaf hanging on a bounded edge; false if none exists.
inline bool prune_finite_leaf(TropicalCurve& c) {
  for (const auto& v : c.finite_vertices) {
    if (c.valency(v) != 1) continue;
    const std::size_t idx = c.incident_edges(v).front();
    if (!c.is_finite(c.edges[idx].other(v))) continue;
    c.edges.erase(c.edges.begin() + static_cast<std::ptrdiff_t>(idx));
    erase_vertex(c, v);
    return true;
  }
  return false;
}

// Merges the two edges at one 2-valent finite vertex; false if none exists.
// The merged edge keeps the id and list position of the earlier edge.
inline bool smooth_two_valent(TropicalCurve& c) {
  for (const auto& v : c.finite_vertices) {
    if (c.valency(v) != 2) continue;
    const auto inc = c.incident_edges(v);
    if (inc.size() != 2) continue;  // a lone loop; excluded by the stability condition
    const Edge first = c.edges[inc[0]];
    const Edge second = c.edges[inc[1]];
    std::string x = first.other(v);
    std::string y = second.other(v);
    EdgeLength len = (first.length.is_infinite() || second.length.is_infinite())
                         ? EdgeLength::infinite()
                         : EdgeLength::finite(first.length.value() + second.length.value());
    if (c.is_infinite(x)) std::swap(x, y);
    c.edges[inc[0]] = {first.id, x, y, len};
    c.edges.erase(c.edges.begin() + static_cast<std::ptrdiff_t>(inc[1]));
    erase_vertex(c, v);
    return true;
  }
  return false;
}

}  // namespace detail

inline TropicalCurve stabilize(const TropicalCurve& c) {
  require_valid(c);
  if (!stabilizable(c))
    throw Error("NotStabilizable", "2g + |V^inf| = " + std::to_string(2 * genus(c) + static_cast<std::int64_t>(c.infinite_vertices.size())) +
                                       " < 3");
  TropicalCurve s = c;
  while (detail::prune_finite_leaf(s)) {
  }
  while (detail::smooth_two_valent(s)) {
  }
  return s;
}

// ---------------------------------------------------------------------------
// Isomorphism matching edge lengths and the infinite-vertex order.

namespace detail {

struct IndexedGraph {
  std::size_t n_finite = 0;
  std::size_t n_vertices = 0;
  // (min index, max index) → sorted lengths
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> bundles;
  std::vector<std::vector<std::pair<std::string, std::size_t>>> adjacency;  // (length, neighbour)
};

inline IndexedGraph index_graph(const TropicalCurve& c) {
  IndexedGraph g;
  g.n_finite = c.finite_vertices.size();
  g.n_vertices = c.vertex_count();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < c.finite_vertices.size(); ++i) idx[c.finite_vertices[i]] = i;
  for (std::size_t i = 0; i < c.infinite_vertices.size(); ++i) idx[c.infinite_vertices[i]] = g.n_finite + i;
  g.adjacency.resize(g.n_vertices);
  for (const auto& e : c.edges) {
    const std::size_t a = idx.at(e.a);
    const std::size_t b = idx.at(e.b);
    g.bundles[{std::min(a, b), std::max(a, b)}].push_back(e.length.to_string());
    g.adjacency[a].push_back({e.length.to_string(), b});
    g.adjacency[b].push_back({e.length.to_string(), a});
  }
  for (auto& [k, v] : g.bundles) std::sort(v.begin(), v.end());
  return g;
}

// Iterated colour refinement over the disjoint union of both graphs, so that
// colours are comparable across them.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine_colours(const IndexedGraph& x, const IndexedGraph& y) {
  std::vector<std::size_t> cx(x.n_vertices), cy(y.n_vertices);
  auto initial = [](const IndexedGraph& g, std::size_t v) -> std::string {
    if (v >= g.n_finite) return "inf" + std::to_string(v - g.n_finite);
    std::vector<std::string> lens;
    for (const auto& [len, w] : g.adjacency[v]) lens.push_back(len);
    std::sort(lens.begin(), lens.end());
    std::string s = "fin" + std::to_string(lens.size());
    for (const auto& l : lens) s += "|" + l;
    return s;
  };
  std::map<std::string, std::size_t> palette;
  auto intern = [&palette](const std::string& s) { return palette.emplace(s, palette.size()).first->second; };
  for (std::size_t v = 0; v < x.n_vertices; ++v) cx[v] = intern(initial(x, v));
  for (std::size_t v = 0; v < y.n_vertices; ++v) cy[v] = intern(initial(y, v));
  for (std::size_t round = 0; round < x.n_vertices + y.n_vertices; ++round) {
    std::map<std::string, std::size_t> next_palette;
    auto signature = [](const IndexedGraph& g, const std::vector<std::size_t>& col, std::size_t v) {
      std::vector<std::string> parts;
      for (const auto& [len, w] : g.adjacency[v]) parts.push_back(len + "@" + std::to_string(col[w]));
      std::sort(parts.begin(), parts.end());
      std::string s = std::to_string(col[v]);
      for (const auto& p : parts) s += "|" + p;
      return s;
    };
    std::vector<std::size_t> nx(x.n_vertices), ny(y.n_vertices);
    for (std::size_t v = 0; v < x.n_vertices; ++v) nx[v] = next_palette.emplace(signature(x, cx, v), next_palette.size()).first->second;
    for (std::size_t v = 0; v < y.n_vertices; ++v) ny[v] = next_palette.emplace(signature(y, cy, v), next_palette.size()).first->second;
    const bool stable = next_palette.size() == palette.size();
    cx = std::move(nx);
    cy = std::move(ny);
    if (stable) break;
    palette = std::move(next_palette);
  }
  return {cx, cy};
}

}  // namespace detail

inline bool isomorphic(const TropicalCurve& x, const TropicalCurve& y) {
  if (x.finite_vertices.size() != y.finite_vertices.size() || x.infinite_vertices.size() != y.infinite_vertices.size() ||
      x.edges.size() != y.edges.size())
    return false;
  const detail::IndexedGraph gx = detail::index_graph(x);
  const detail::IndexedGraph gy = detail::index_graph(y);
  const auto [cx, cy] = detail::refine_colours(gx, gy);
  {
    std::vector<std::size_t> sx = cx, sy = cy;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    if (sx != sy) return false;
  }
  const std::size_t nf = gx.n_finite;
  std::vector<std::size_t> map(gx.n_vertices, SIZE_MAX);
  std::vector<bool> used(gy.n_vertices, false);
  for (std::size_t i = nf; i < gx.n_vertices; ++i) {
    map[i] = i;
    used[i] = true;
  }
  auto bundle = [](const detail::IndexedGraph& g, std::size_t a, std::size_t b) {
    const auto it = g.bundles.find({std::min(a, b), std::max(a, b)});
    return it == g.bundles.end() ? std::vector<std::string>{} : it->second;
  };
  // Consistent iff every bundle between v and an already-mapped vertex matches.
  auto consistent = [&](std::size_t v) {
    for (std::size_t w = 0; w < gx.n_vertices; ++w) {
      if (map[w] == SIZE_MAX) continue;
      if (bundle(gx, v, w) != bundle(gy, map[v], map[w])) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t v) -> bool {
    if (v == nf) return true;
    for (std::size_t cand = 0; cand < nf; ++cand) {
      if (used[cand] || cy[cand] != cx[v]) continue;
      map[v] = cand;
      used[cand] = true;
      if (consistent(v) && search(v + 1)) return true;
      map[v] = SIZE_MAX;
      used[cand] = false;
    }
    return false;
  };
  return search(0);
}

}  // namespace tropicorr
