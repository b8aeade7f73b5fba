#pragma once

// CurveFile JSON ("schema": "tropicorr/1") and JSON views of the analyses.
//
// Rationals travel as strings "p" or "p/q"; bare JSON integers are accepted on
// input, floats never. Objects are emitted with sorted keys, so output is
// byte-stable for a fixed input.

#include "tropicorr/error.hpp"
#include "tropicorr/exactla.hpp"
#include "tropicorr/paramcurve.hpp"

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tropicorr::io {

using json = nlohmann::json;

inline constexpr const char* kCurveSchema = "tropicorr/1";

struct CurveFile {
  ParamTropicalCurve p;
  std::optional<AffineConstraintSet> constraints;
  std::uint64_t char_p = 0;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) { throw Error("ParseError", where + ": " + what); }

inline void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) fail(where, "unknown field '" + k + "'");
}

inline const json& field(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

inline const json& array_field(const json& obj, const std::string& where, const char* key) {
  const json& v = field(obj, where, key);
  if (!v.is_array()) fail(where, std::string("field '") + key + "' must be an array");
  return v;
}

inline std::string id_of(const json& v, const std::string& where) {
  if (!v.is_string() || v.get<std::string>().empty()) fail(where, "id must be a nonempty string");
  return v.get<std::string>();
}

inline Int parse_int_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Int(v.get<std::uint64_t>()) : Int(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return parse_int(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected an integer");
}

inline Rat parse_rat_json(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(parse_int_json(v, where));
  if (!v.is_string()) fail(where, "expected a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

inline std::size_t parse_natural(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) fail(where, "expected a natural number");
  return v.get<std::size_t>();
}

template <class F>
auto parse_vector(const json& v, std::size_t n, const std::string& where, F&& one) {
  if (!v.is_array()) fail(where, "expected an array");
  if (v.size() != n) fail(where, "expected " + std::to_string(n) + " coordinates, got " + std::to_string(v.size()));
  std::vector<decltype(one(v[0], where))> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(one(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline CurveFile parse_curve_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("ParseError", std::string("malformed JSON: ") + e.what());
  }
  using namespace detail;
  only_keys(doc, "curve file", {"schema", "lattice_rank", "finite_vertices", "infinite_vertices", "edges", "constraints", "char"});
  const json& schema = field(doc, "curve file", "schema");
  if (!schema.is_string() || schema.get<std::string>() != kCurveSchema) fail("schema", std::string("expected \"") + kCurveSchema + "\"");

  CurveFile f;
  const std::size_t n = parse_natural(field(doc, "curve file", "lattice_rank"), "lattice_rank");
  if (n == 0) fail("lattice_rank", "must be positive");
  f.p.lattice_rank = n;
  const auto rat = [](const json& v, const std::string& w) { return parse_rat_json(v, w); };
  const auto integer = [](const json& v, const std::string& w) { return parse_int_json(v, w); };

  const json& fv = array_field(doc, "curve file", "finite_vertices");
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const std::string where = "finite_vertices[" + std::to_string(i) + "]";
    only_keys(fv[i], where, {"id", "h"});
    const std::string id = id_of(field(fv[i], where, "id"), where + ".id");
    f.p.curve.finite_vertices.push_back(id);
    f.p.h[id] = parse_vector(field(fv[i], where, "h"), n, where + ".h", rat);
  }
  const json& iv = array_field(doc, "curve file", "infinite_vertices");
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const std::string where = "infinite_vertices[" + std::to_string(i) + "]";
    only_keys(iv[i], where, {"id", "h"});
    const std::string id = id_of(field(iv[i], where, "id"), where + ".id");
    f.p.curve.infinite_vertices.push_back(id);
    f.p.h[id] = to_rat(parse_vector(field(iv[i], where, "h"), n, where + ".h", integer));
  }
  const json& ev = array_field(doc, "curve file", "edges");
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    only_keys(ev[i], where, {"id", "ends", "length"});
    const std::string id = id_of(field(ev[i], where, "id"), where + ".id");
    const json& ends = field(ev[i], where, "ends");
    if (!ends.is_array() || ends.size() != 2) fail(where + ".ends", "expected two vertex ids");
    const json& len = field(ev[i], where, "length");
    EdgeLength length = EdgeLength::infinite();
    if (!(len.is_string() && len.get<std::string>() == "inf")) length = EdgeLength::finite(parse_rat_json(len, where + ".length"));
    f.p.curve.edges.push_back({id, id_of(ends[0], where + ".ends[0]"), id_of(ends[1], where + ".ends[1]"), length});
  }
  if (doc.contains("constraints")) {
    const json& cv = array_field(doc, "curve file", "constraints");
    AffineConstraintSet a;
    for (std::size_t i = 0; i < cv.size(); ++i) {
      const std::string where = "constraints[" + std::to_string(i) + "]";
      only_keys(cv[i], where, {"L_basis", "point"});
      const json& rows = array_field(cv[i], where, "L_basis");
      std::vector<IntVec> basis;
      for (std::size_t r = 0; r < rows.size(); ++r)
        basis.push_back(parse_vector(rows[r], n, where + ".L_basis[" + std::to_string(r) + "]", integer));
      a.items.push_back({Sublattice::span(n, basis), parse_vector(field(cv[i], where, "point"), n, where + ".point", rat)});
    }
    f.constraints = a;
  }
  if (doc.contains("char")) f.char_p = parse_natural(doc["char"], "char");
  return f;
}

inline json rat_array(const RatVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

// Integers as JSON numbers while they fit, as decimal strings beyond that.
inline json int_value(const Int& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

inline json int_array(const IntVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(int_value(x));
  return out;
}

inline json matrix_rows(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    IntVec row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(int_array(row));
  }
  return out;
}

inline json to_json(const CurveFile& f) {
  json doc;
  doc["schema"] = kCurveSchema;
  doc["lattice_rank"] = f.p.lattice_rank;
  doc["finite_vertices"] = json::array();
  for (const auto& v : f.p.curve.finite_vertices) doc["finite_vertices"].push_back({{"id", v}, {"h", rat_array(f.p.at(v))}});
  doc["infinite_vertices"] = json::array();
  for (const auto& v : f.p.curve.infinite_vertices) doc["infinite_vertices"].push_back({{"id", v}, {"h", int_array(to_int(f.p.at(v)))}});
  doc["edges"] = json::array();
  for (const auto& e : f.p.curve.edges)
    doc["edges"].push_back({{"id", e.id}, {"ends", {e.a, e.b}}, {"length", e.length.is_infinite() ? std::string("inf") : to_string(e.length.value())}});
  if (f.constraints) {
    doc["constraints"] = json::array();
    for (const auto& c : f.constraints->items) doc["constraints"].push_back({{"L_basis", matrix_rows(c.L.basis())}, {"point", rat_array(c.point)}});
  }
  doc["char"] = f.char_p;
  return doc;
}

inline json to_json(const FGAbelianGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion) t.push_back(int_value(d));
  return {{"rank", g.rank}, {"torsion", t}};
}

inline json to_json(const GroupSize& g) {
  return {{"free_rank", g.free_rank}, {"kdim", g.kdim}, {"torsion_order", int_value(g.torsion_order)}, {"finite", g.is_finite()}};
}

}  // namespace tropicorr::io
