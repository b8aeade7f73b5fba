#pragma once

#include "tropicorr/paramcurve.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fixture {

using namespace tropicorr;

class Builder {
 public:
  explicit Builder(std::size_t n) { p_.lattice_rank = n; }

  Builder& finite(const std::string& id, const std::vector<std::string>& h) {
    p_.curve.finite_vertices.push_back(id);
    RatVec v;
    for (const auto& s : h) v.push_back(parse_rational(s));
    p_.h[id] = v;
    return *this;
  }
  Builder& infinite(const std::string& id, const std::vector<long>& h) {
    p_.curve.infinite_vertices.push_back(id);
    RatVec v;
    for (long x : h) v.push_back(Rat(x));
    p_.h[id] = v;
    return *this;
  }
  Builder& edge(const std::string& id, const std::string& a, const std::string& b, const std::string& len) {
    p_.curve.edges.push_back({id, a, b, len == "inf" ? EdgeLength::infinite() : EdgeLength::finite(parse_rational(len))});
    return *this;
  }
  ParamTropicalCurve build() const { return p_; }

 private:
  ParamTropicalCurve p_;
};

inline AffineConstraintSet point_constraints(std::size_t n, const std::vector<std::vector<std::string>>& points) {
  AffineConstraintSet a;
  for (const auto& pt : points) {
    RatVec v;
    for (const auto& s : pt) v.push_back(parse_rational(s));
    a.items.push_back({Sublattice(n), v});
  }
  return a;
}

// Vertex at the origin with ends (−1,0), (0,−1), (1,1).
inline ParamTropicalCurve tropical_line(long scale = 1) {
  return Builder(2)
      .finite("v0", {"0", "0"})
      .infinite("a", {-scale, 0})
      .infinite("b", {0, -scale})
      .infinite("c", {scale, scale})
      .edge("ea", "v0", "a", "inf")
      .edge("eb", "v0", "b", "inf")
      .edge("ec", "v0", "c", "inf")
      .build();
}

// Line through (−s,0) and (s,s) with the two marked ends listed first.
// s = 1 is the classical line through two points, s = 2 the doubled line.
inline ParamTropicalCurve line_through_points(long s = 1) {
  const std::string ss = std::to_string(s);
  return Builder(2)
      .finite("v0", {"0", "0"})
      .finite("p1", {"-" + ss, "0"})
      .finite("p2", {ss, ss})
      .infinite("m1", {0, 0})
      .infinite("m2", {0, 0})
      .infinite("d1", {-s, 0})
      .infinite("d2", {0, -s})
      .infinite("d3", {s, s})
      .edge("e1", "v0", "p1", "1")
      .edge("e2", "v0", "p2", "1")
      .edge("u1", "p1", "m1", "inf")
      .edge("u2", "p2", "m2", "inf")
      .edge("u3", "p1", "d1", "inf")
      .edge("u4", "v0", "d2", "inf")
      .edge("u5", "p2", "d3", "inf")
      .build();
}

inline AffineConstraintSet line_through_points_constraints(long s = 1) {
  const std::string ss = std::to_string(s);
  return point_constraints(2, {{"-" + ss, "0"}, {ss, ss}});
}

// Segments (0,0)–(2,2) and (2,0)–(0,2) crossing at (1,1), joined along the
// x-axis so that the curve is connected and balanced.
inline ParamTropicalCurve x_configuration() {
  return Builder(2)
      .finite("A", {"0", "0"})
      .finite("B", {"2", "2"})
      .finite("C", {"2", "0"})
      .finite("D", {"0", "2"})
      .infinite("xa", {-2, -1})
      .infinite("xb", {1, 1})
      .infinite("xc", {2, -1})
      .infinite("xd", {-1, 1})
      .edge("AB", "A", "B", "2")
      .edge("CD", "C", "D", "2")
      .edge("AC", "A", "C", "2")
      .edge("ua", "A", "xa", "inf")
      .edge("ub", "B", "xb", "inf")
      .edge("uc", "C", "xc", "inf")
      .edge("ud", "D", "xd", "inf")
      .build();
}

// Triangle (0,0), (1,0), (0,1) with unit edges and one end per corner.
inline ParamTropicalCurve triangle() {
  return Builder(2)
      .finite("P", {"0", "0"})
      .finite("Q", {"1", "0"})
      .finite("R", {"0", "1"})
      .infinite("xp", {-1, -1})
      .infinite("xq", {2, -1})
      .infinite("xr", {-1, 2})
      .edge("PQ", "P", "Q", "1")
      .edge("QR", "Q", "R", "1")
      .edge("RP", "R", "P", "1")
      .edge("up", "P", "xp", "inf")
      .edge("uq", "Q", "xq", "inf")
      .edge("ur", "R", "xr", "inf")
      .build();
}

// The triangle with marked points on the ends at P and Q (at distance 1),
// marked ends first; rank 5 and codim 4.
inline ParamTropicalCurve marked_triangle() {
  return Builder(2)
      .finite("P", {"0", "0"})
      .finite("Q", {"1", "0"})
      .finite("R", {"0", "1"})
      .finite("MP", {"-1", "-1"})
      .finite("MQ", {"3", "-1"})
      .infinite("mp", {0, 0})
      .infinite("mq", {0, 0})
      .infinite("xp", {-1, -1})
      .infinite("xq", {2, -1})
      .infinite("xr", {-1, 2})
      .edge("PQ", "P", "Q", "1")
      .edge("QR", "Q", "R", "1")
      .edge("RP", "R", "P", "1")
      .edge("sp", "P", "MP", "1")
      .edge("sq", "Q", "MQ", "1")
      .edge("ump", "MP", "mp", "inf")
      .edge("umq", "MQ", "mq", "inf")
      .edge("up", "MP", "xp", "inf")
      .edge("uq", "MQ", "xq", "inf")
      .edge("ur", "R", "xr", "inf")
      .build();
}

inline AffineConstraintSet marked_triangle_constraints() { return point_constraints(2, {{"-1", "-1"}, {"3", "-1"}}); }

}  // namespace fixture
