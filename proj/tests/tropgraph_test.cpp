#include "support/fixtures.hpp"
#include "tropicorr/tropgraph.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tropicorr;

namespace {

TropicalCurve curve(std::vector<std::string> fin, std::vector<std::string> inf, std::vector<Edge> edges) {
  return {std::move(fin), std::move(inf), std::move(edges)};
}

Edge bounded(std::string id, std::string a, std::string b, Rat len) { return {std::move(id), std::move(a), std::move(b), EdgeLength::finite(len)}; }
Edge unbounded(std::string id, std::string a, std::string b) { return {std::move(id), std::move(a), std::move(b), EdgeLength::infinite()}; }

bool has_code(const ValidationReport& r, const std::string& code) {
  for (const auto& v : r.violations)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST(Validate, SingleVertexIsValid) { EXPECT_TRUE(validate(curve({"v"}, {}, {})).ok()); }

TEST(Validate, TwoValentInfiniteVertexIsRejected) {
  const TropicalCurve c = curve({"v", "w"}, {"x"}, {unbounded("e1", "v", "x"), unbounded("e2", "w", "x"), bounded("e3", "v", "w", 1)});
  EXPECT_TRUE(has_code(validate(c), "infinite-vertex"));
}

TEST(Validate, DegenerateMetricIsRejected) {
  const TropicalCurve c = curve({"v", "w"}, {}, {bounded("e", "v", "w", 0)});
  EXPECT_TRUE(has_code(validate(c), "edge-length"));
  const TropicalCurve d = curve({"v", "w"}, {}, {{"e", "v", "w", EdgeLength::infinite()}});
  EXPECT_TRUE(has_code(validate(d), "edge-length"));
}

TEST(Validate, OtherViolations) {
  EXPECT_TRUE(has_code(validate(curve({"v", "w"}, {}, {})), "disconnected"));
  EXPECT_TRUE(has_code(validate(curve({"v"}, {}, {bounded("e", "v", "zz", 1)})), "unknown-vertex"));
  EXPECT_TRUE(has_code(validate(curve({"v", "v"}, {}, {})), "duplicate-id"));
  EXPECT_TRUE(has_code(validate(curve({}, {}, {})), "empty"));
  EXPECT_TRUE(has_code(validate(curve({"v"}, {"x"}, {bounded("e", "v", "x", 1)})), "edge-length"));
}

TEST(Genus, Examples) {
  EXPECT_EQ(genus(curve({"v"}, {}, {bounded("l", "v", "v", 1)})), 1);
  EXPECT_EQ(genus(curve({"a", "b", "c"}, {}, {bounded("e1", "a", "b", 1), bounded("e2", "b", "c", 1)})), 0);
  EXPECT_EQ(genus(curve({"a", "b", "c"}, {}, {bounded("e1", "a", "b", 1), bounded("e2", "b", "c", 1), bounded("e3", "c", "a", 1)})),
            1);
}

TEST(Modify, SubdivideBoundedEdge) {
  const TropicalCurve c = curve({"a", "b"}, {}, {bounded("e", "a", "b", 1)});
  const TropicalCurve s = modify(c, {SubdivideBounded{"e", {Rat(1, 3)}}});
  ASSERT_EQ(s.edges.size(), 2u);
  EXPECT_EQ(s.edges[0].length, EdgeLength::finite(Rat(1, 3)));
  EXPECT_EQ(s.edges[1].length, EdgeLength::finite(Rat(2, 3)));
  EXPECT_EQ(s.edges[0].a, "a");
  EXPECT_EQ(s.edges[1].b, "b");
  EXPECT_TRUE(validate(s).ok());
}

TEST(Modify, SubdivideUnboundedEdge) {
  const TropicalCurve c = curve({"a"}, {"x"}, {unbounded("e", "a", "x")});
  const TropicalCurve s = modify(c, {SubdivideUnbounded{"e", {Rat(2)}}});
  ASSERT_EQ(s.edges.size(), 2u);
  EXPECT_EQ(s.edges[0].length, EdgeLength::finite(Rat(2)));
  EXPECT_TRUE(s.edges[1].length.is_infinite());
  EXPECT_EQ(s.infinite_vertices, c.infinite_vertices);
}

TEST(Modify, AttachTree) {
  const TropicalCurve c = curve({"v"}, {"x", "y", "z"}, {unbounded("e1", "v", "x"), unbounded("e2", "v", "y"), unbounded("e3", "v", "z")});
  TreeAttachment t{"v", curve({"r", "s"}, {}, {bounded("t1", "r", "s", 2)}), "r"};
  const TropicalCurve s = modify(c, {t});
  EXPECT_EQ(s.valency("v"), 4u);
  EXPECT_EQ(genus(s), genus(c));
  EXPECT_TRUE(validate(s).ok());

  TreeAttachment leaf{"v", curve({"r"}, {"w"}, {unbounded("t1", "r", "w")}), "r"};
  const TropicalCurve s2 = modify(c, {leaf});
  EXPECT_EQ(s2.infinite_vertices, (std::vector<std::string>{"x", "y", "z", "w"}));
}

TEST(Modify, RejectsBadDistances) {
  const TropicalCurve c = curve({"a", "b"}, {}, {bounded("e", "a", "b", 1)});
  EXPECT_THROW(modify(c, {SubdivideBounded{"e", {Rat(1, 2), Rat(1, 3)}}}), Error);
  EXPECT_THROW(modify(c, {SubdivideBounded{"e", {Rat(1)}}}), Error);
  EXPECT_THROW(modify(c, {SubdivideBounded{"e", {Rat(0)}}}), Error);
  try {
    modify(c, {SubdivideBounded{"e", {Rat(3, 2)}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "BadSubdivision");
  }
}

TEST(Stabilize, StableCurveIsFixed) {
  const TropicalCurve c = fixture::tropical_line().curve;
  EXPECT_EQ(stabilize(c), c);
}

TEST(Stabilize, SubdividedLoopCollapses) {
  TropicalCurve c = curve({"v"}, {"x"}, {bounded("l", "v", "v", 1), unbounded("u", "v", "x")});
  c = modify(c, {SubdivideBounded{"l", {Rat(1, 3), Rat(2, 3)}}});
  ASSERT_EQ(c.finite_vertices.size(), 3u);
  const TropicalCurve s = stabilize(c);
  ASSERT_EQ(s.finite_vertices.size(), 1u);
  ASSERT_EQ(s.edges.size(), 2u);
  Rat loop_len = 0;
  for (const auto& e : s.edges)
    if (e.is_loop()) loop_len = e.length.value();
  EXPECT_EQ(loop_len, 1);
  EXPECT_TRUE(isomorphic(s, curve({"v"}, {"x"}, {bounded("l", "v", "v", 1), unbounded("u", "v", "x")})));
}

TEST(Stabilize, RejectsUnstableTopology) {
  const TropicalCurve c = curve({"v"}, {"x", "y"}, {unbounded("e1", "v", "x"), unbounded("e2", "v", "y")});
  try {
    stabilize(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "NotStabilizable");
  }
}

TEST(Stabilize, RemovesFiniteTreesAndSmooths) {
  const TropicalCurve c = fixture::tropical_line().curve;
  TreeAttachment t{"v0", curve({"r", "s", "u"}, {}, {bounded("t1", "r", "s", 1), bounded("t2", "s", "u", 1)}), "r"};
  const TropicalCurve m = modify(c, {SubdivideUnbounded{"ea", {Rat(1), Rat(5, 2)}}, t});
  EXPECT_TRUE(isomorphic(stabilize(m), c));
  EXPECT_EQ(stabilize(stabilize(m)), stabilize(m));
}

TEST(Isomorphic, RespectsLengthsAndInfiniteOrder) {
  const TropicalCurve a = curve({"v", "w"}, {"x", "y", "z", "t"},
                                {bounded("e", "v", "w", 2), unbounded("1", "v", "x"), unbounded("2", "v", "y"), unbounded("3", "w", "z"),
                                 unbounded("4", "w", "t")});
  TropicalCurve b = a;
  b.finite_vertices = {"w", "v"};
  EXPECT_TRUE(isomorphic(a, b));
  TropicalCurve c = a;
  c.edges[0].length = EdgeLength::finite(3);
  EXPECT_FALSE(isomorphic(a, c));
  TropicalCurve d = a;
  d.infinite_vertices = {"x", "z", "y", "t"};
  EXPECT_FALSE(isomorphic(a, d));
}

// Random stable curves: modify then stabilize recovers them up to isomorphism.
TEST(Stabilize, RecoversRandomStableCurves) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    // stable cubic graph: a cycle of k vertices, each with one end
    const std::size_t k = 1 + rng() % 4;
    TropicalCurve s;
    for (std::size_t i = 0; i < k; ++i) {
      s.finite_vertices.push_back("v" + std::to_string(i));
      s.infinite_vertices.push_back("x" + std::to_string(i));
      s.edges.push_back(unbounded("u" + std::to_string(i), "v" + std::to_string(i), "x" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < k; ++i)
      s.edges.push_back(bounded("c" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string((i + 1) % k),
                                Rat(static_cast<long>(1 + rng() % 5), static_cast<long>(1 + rng() % 3))));
    if (k == 1) s.edges.push_back(unbounded("extra", "v0", "x1")), s.infinite_vertices.push_back("x1");
    ASSERT_TRUE(validate(s).ok());
    ASSERT_TRUE(is_stable(s));
    std::vector<ModifyStep> steps;
    const Edge& e = s.edges[s.edges.size() - 1];
    if (!e.length.is_infinite()) steps.emplace_back(SubdivideBounded{e.id, {e.length.value() / 2}});
    steps.emplace_back(SubdivideUnbounded{"u0", {Rat(1), Rat(2)}});
    steps.emplace_back(TreeAttachment{"v0", curve({"r", "q"}, {}, {bounded("t", "r", "q", 1)}), "r"});
    const TropicalCurve m = modify(s, steps);
    EXPECT_EQ(genus(m), genus(s));
    EXPECT_TRUE(isomorphic(stabilize(m), s));
    EXPECT_EQ(stabilize(m).infinite_vertices, s.infinite_vertices);
  }
}
