#pragma once

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 parse or
// usage error. Reports carry the SHA-256 of the input file bytes.

#include "tropicorr/complexes.hpp"
#include "tropicorr/counting.hpp"
#include "tropicorr/error.hpp"
#include "tropicorr/fanmodel.hpp"
#include "tropicorr/io.hpp"
#include "tropicorr/paramcurve.hpp"
#include "tropicorr/stacky.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace tropicorr::cli {

using io::json;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"validate", "info",   "stabilize", "tr",     "fan",           "complex",
                                          "regular",  "count",  "count-elliptic", "stacky", "reduction-data"};
  return c;
}

struct Options {
  std::string command;
  std::string file;
  bool json_output = false;
  std::optional<std::uint64_t> char_p;
  std::optional<std::string> group;
  bool constrained = false;
  bool elliptic = false;
  std::optional<std::string> out_file;
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("DigestFailed", "SHA-256 failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

namespace detail {

struct Context {
  const Options& opt;
  io::CurveFile file;
  std::uint64_t char_p = 0;
  std::vector<std::string> warnings;
};

inline void require_valid(const ParamTropicalCurve& p) {
  const ValidationReport r = validate(p);
  if (r.ok()) return;
  const Violation& v = r.violations.front();
  throw Error(v.code == "unbalanced" ? "NotBalanced" : "InvalidCurve", v.code + " " + v.detail);
}

inline std::optional<AffineConstraintSet> constraints_for(Context& ctx, bool wanted) {
  if (wanted) {
    if (!ctx.file.constraints) throw Error("NoConstraints", "--constrained given but the file has no constraints");
    return ctx.file.constraints;
  }
  if (ctx.file.constraints && !ctx.file.constraints->empty()) ctx.warnings.push_back("file constraints ignored; pass --constrained to use them");
  return std::nullopt;
}

inline CoeffGroup group_for(const Context& ctx, const std::string& fallback) {
  const std::string g = ctx.opt.group.value_or(fallback);
  if (g == "Z") return CoeffGroup::integers();
  if (g == "Q") return CoeffGroup::rationals();
  if (g == "Fp") {
    if (ctx.char_p == 0) return CoeffGroup::rationals();
    return CoeffGroup::field(ctx.char_p);
  }
  return CoeffGroup::units(ctx.char_p);
}

inline json violations_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) out.push_back({{"code", v.code}, {"detail", v.detail}});
  return out;
}

inline json cmd_validate(Context& ctx, int& exit_code) {
  const ParamTropicalCurve& p = ctx.file.p;
  ValidationReport r = validate(p);
  json result;
  if (r.ok() && ctx.file.constraints) {
    try {
      const ConstraintReport c = check_constraint(p, *ctx.file.constraints);
      result["constraint"] = {{"satisfies", c.satisfies}, {"simple", c.simple}, {"codim", c.codim}, {"issues", c.issues}};
      if (!c.satisfies)
        for (const auto& issue : c.issues) r.violations.push_back({"constraint", issue});
    } catch (const Error& e) {
      r.violations.push_back({e.code(), e.what()});
    }
  }
  result["valid"] = r.ok();
  result["violations"] = violations_json(r);
  if (!r.ok()) exit_code = 1;
  return result;
}

inline json cmd_info(Context& ctx) {
  const ParamTropicalCurve& p = ctx.file.p;
  const ValidationReport graph = validate(p.curve);
  if (!graph.ok()) throw Error("InvalidCurve", graph.violations.front().code + " " + graph.violations.front().detail);
  json r;
  r["genus"] = genus(p.curve);
  r["finite_vertices"] = p.curve.finite_vertices.size();
  r["infinite_vertices"] = p.curve.infinite_vertices.size();
  r["bounded_edges"] = p.curve.bounded_edge_count();
  r["overvalency"] = overvalency(p.curve);
  r["stable"] = is_stable(p.curve);
  const ValidationReport full = validate(p);
  r["balanced"] = full.ok();
  if (!full.ok()) {
    r["violations"] = violations_json(full);
    return r;
  }
  json deg = json::array();
  for (const auto& t : degree(p)) deg.push_back({{"direction", io::int_array(t.direction)}, {"weight", io::int_value(t.weight)}});
  r["degree"] = deg;
  r["c_gamma"] = zero_slope_bounded_count(p);
  r["rank"] = rank(p);
  r["rank_formula"] = rank_formula(p);
  if (stabilizable(p.curve)) r["moduli_dimension"] = moduli_dimension(p);
  if (genus(p.curve) == 1) r["tropical_j"] = to_string(tropical_j(p));
  return r;
}

inline json cmd_curve_out(Context& ctx, const ParamTropicalCurve& q, std::ostream& out) {
  io::CurveFile f = ctx.file;
  f.p = q;
  const json doc = io::to_json(f);
  if (!ctx.opt.out_file) {
    out << doc.dump(2) << "\n";
    return nullptr;
  }
  std::ofstream os(*ctx.opt.out_file);
  if (!os) throw Error("WriteFailed", "cannot write '" + *ctx.opt.out_file + "'");
  os << doc.dump(2) << "\n";
  return {{"written", *ctx.opt.out_file},
          {"finite_vertices", q.curve.finite_vertices.size()},
          {"bounded_edges", q.curve.bounded_edge_count()},
          {"output_sha256", sha256_hex(doc.dump(2) + "\n")}};
}

inline json cmd_fan(Context& ctx) {
  require_valid(ctx.file.p);
  const ParamTropicalCurve tr = gamma_tr(ctx.file.p);
  const FanModel fm = fan_model_of_refined(tr);
  const ConeMultiplicities m = cone_multiplicities(fm, tr);
  json rays = json::array();
  for (std::size_t i = 0; i < fm.rays.size(); ++i) {
    json r = {{"index", i}, {"generator", io::int_array(fm.rays[i])}, {"eta", static_cast<bool>(fm.eta[i])}};
    r["vertices"] = fm.ray_vertices.count(i) ? json(fm.ray_vertices.at(i)) : json::array();
    if (m.rays.count(i)) r["multiplicity"] = io::int_value(m.rays.at(i));
    rays.push_back(r);
  }
  json cones = json::array();
  for (std::size_t c = 0; c < fm.cones.size(); ++c) {
    json j = {{"index", c}, {"rays", {fm.cones[c].first, fm.cones[c].second}}};
    j["edges"] = fm.cone_edges.count(c) ? json(fm.cone_edges.at(c)) : json::array();
    if (m.cones.count(c)) j["multiplicity"] = io::int_value(m.cones.at(c));
    cones.push_back(j);
  }
  return {{"ambient_rank", fm.ambient_rank}, {"rays", rays}, {"cones", cones}};
}

inline json complex_json(const ComplexReport& r) {
  return {{"matrix_shape", {r.matrix.rows(), r.matrix.cols()}},
          {"E1_rank", r.E1_rank},
          {"E1_basis", io::matrix_rows(r.E1_lattice.basis())},
          {"E2", io::to_json(r.E2)},
          {"c_gamma", r.c_gamma},
          {"E1_G", io::to_json(r.E1_G)},
          {"E2_G", io::to_json(r.E2_G)}};
}

inline json cmd_complex(Context& ctx) {
  require_valid(ctx.file.p);
  const CoeffGroup g = group_for(ctx, "Z");
  ComplexSpec spec;
  spec.constraints = constraints_for(ctx, ctx.opt.constrained);
  spec.elliptic = ctx.opt.elliptic;
  json variants;
  spec.variant = Variant::Beta;
  variants["CE"] = complex_json(compute(ctx.file.p, spec, g));
  spec.variant = Variant::B;
  try {
    variants["E"] = complex_json(compute(ctx.file.p, spec, g));
  } catch (const Error& e) {
    if (e.code() != "UnsupportedVariant") throw;
    ctx.warnings.push_back("E variant skipped: " + std::string(e.what()));
  }
  return {{"group", g.name()}, {"constrained", spec.constraints.has_value()}, {"elliptic", spec.elliptic}, {"variants", variants}};
}

inline json cmd_regular(Context& ctx) {
  require_valid(ctx.file.p);
  const CoeffGroup g = group_for(ctx, "Fp");
  const RegularityVerdict v = regularity(ctx.file.p, constraints_for(ctx, ctx.opt.constrained), g, ctx.opt.elliptic);
  json r = {{"group", g.name()}, {"g_regular", v.g_regular}, {"obstruction", io::to_json(v.obstruction)}};
  if (v.constraint_simple) r["constraint_simple"] = *v.constraint_simple;
  if (v.elliptically_regular) r["elliptically_regular"] = *v.elliptically_regular;
  if (v.elliptic_obstruction) r["elliptic_obstruction"] = io::to_json(*v.elliptic_obstruction);
  return r;
}

inline json hypotheses_json(const CountHypotheses& h) {
  json j = {{"trivalent", h.trivalent},   {"satisfies_A", h.satisfies_A}, {"regular", h.regular},
            {"codim_match", h.codim_match}, {"no_zero_slope_bounded", h.no_zero_slope_bounded}, {"char_ok", h.char_ok}};
  if (h.elliptic_regular) j["elliptic_regular"] = *h.elliptic_regular;
  return j;
}

inline json count_json(const CountResult& r, std::uint64_t char_p) {
  json checks = json::array();
  for (const auto& c : r.cross_checks) checks.push_back({{"name", c.name}, {"value", c.value.str()}, {"holds", c.holds}});
  return {{"count", r.count.str()},
          {"factorization", {r.factorization.first.str(), r.factorization.second.str()}},
          {"cross_checks", checks},
          {"hypotheses", hypotheses_json(r.hypotheses)},
          {"char", char_p}};
}

inline json cmd_count(Context& ctx, bool elliptic) {
  require_valid(ctx.file.p);
  if (!elliptic) return count_json(correspondence_count(ctx.file.p, ctx.file.constraints, ctx.char_p), ctx.char_p);
  json r = count_json(elliptic_count(ctx.file.p, ctx.file.constraints, ctx.char_p), ctx.char_p);
  r["tropical_j"] = to_string(tropical_j(ctx.file.p));
  ctx.warnings.push_back("the count holds for any J with val(J) = -j; J itself is not modeled");
  return r;
}

inline json cmd_stacky(Context& ctx) {
  require_valid(ctx.file.p);
  const ParamTropicalCurve tr = gamma_tr(ctx.file.p);
  const Int a = ramification(tr, 1).minimal_a;
  const StackySigma s = stacky_data(tr, a);
  json rays = json::array();
  for (std::size_t i = 0; i < s.fan.rays.size(); ++i)
    rays.push_back({{"index", i},
                    {"generator", io::int_array(s.ray_generator(i))},
                    {"eta", static_cast<bool>(s.fan.eta[i])},
                    {"order", io::int_value(s.ray_order.at(i))},
                    {"lattice", io::matrix_rows(s.ray_lattice.at(i).basis())}});
  json cones = json::array();
  for (std::size_t c = 0; c < s.fan.cones.size(); ++c)
    cones.push_back({{"index", c},
                     {"rays", {s.fan.cones[c].first, s.fan.cones[c].second}},
                     {"order", io::int_value(s.cone_order.at(c))},
                     {"lattice", io::matrix_rows(s.cone_lattice.at(c).basis())}});
  const NodeStackData ns = node_stack(tr);
  json edges = json::object(), verts = json::object();
  for (const auto& [e, o] : ns.edge_orders) edges[e] = io::int_value(o);
  for (const auto& [v, o] : ns.vertex_orders) verts[v] = io::int_value(o);
  return {{"a", io::int_value(a)},
          {"rays", rays},
          {"cones", cones},
          {"compatible", compatible(s)},
          {"dm", {{"char", ctx.char_p}, {"is_dm", is_dm(ctx.file.p, ctx.char_p)}}},
          {"node_stack", {{"edges", edges}, {"vertices", verts}}}};
}

inline json cmd_reduction_data(Context& ctx) {
  require_valid(ctx.file.p);
  const ParamTropicalCurve tr = gamma_tr(ctx.file.p);
  const Ramification ram = ramification(tr, 1);
  json verts = json::object();
  for (const auto& v : tr.curve.finite_vertices) {
    json list = json::array();
    for (const auto& x : reduction_exponents(tr, v)) list.push_back({{"special_point", x.special_point}, {"exponent", io::int_array(x.exponent)}});
    verts[v] = list;
  }
  return {{"ramification", {{"minimal_a", io::int_value(ram.minimal_a)}, {"minimal_a_positions", io::int_value(ram.minimal_a_positions)}}},
          {"vertices", verts}};
}

inline void print_human(std::ostream& out, const json& report) {
  out << report["command"].get<std::string>() << " " << report["input_sha256"].get<std::string>().substr(0, 12) << "\n";
  if (report.contains("result") && report["result"].is_object())
    for (const auto& [k, v] : report["result"].items()) out << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  for (const auto& w : report["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Exact lattice computations for parameterized tropical curves", "tropicorr"};
  app.add_option("command", opt.command, "analysis to run")->required()->check(CLI::IsMember(commands()));
  app.add_option("file", opt.file, "curve file (schema tropicorr/1)")->required();
  app.add_flag("--json", opt.json_output, "machine-readable report");
  app.add_option("--char", opt.char_p, "residue characteristic, zero or prime; overrides the file");
  app.add_option("--group", opt.group, "coefficient group")->check(CLI::IsMember({"Z", "Q", "Fp", "kstar"}));
  app.add_flag("--constrained", opt.constrained, "use the file constraints");
  app.add_flag("--elliptic", opt.elliptic, "add the j row");
  app.add_option("--out", opt.out_file, "write curve output here");
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  json report = {{"schema", "tropicorr-report/1"}, {"command", opt.command}, {"input_sha256", ""}, {"warnings", json::array()}};
  auto emit_error = [&](const std::string& code, const std::string& message, int status) {
    report["status"] = "error";
    report["error"] = {{"code", code}, {"message", message}};
    if (opt.json_output) out << report.dump(2) << "\n";
    else err << "error: " << message << "\n";
    return status;
  };

  std::ifstream in(opt.file, std::ios::binary);
  if (!in) return emit_error("ParseError", "ParseError: cannot read '" + opt.file + "'", 2);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  report["input_sha256"] = sha256_hex(bytes);

  detail::Context ctx{opt, {}, 0, {}};
  try {
    ctx.file = io::parse_curve_file(bytes);
  } catch (const Error& e) {
    return emit_error(e.code(), e.what(), 2);
  }
  ctx.char_p = opt.char_p.value_or(ctx.file.char_p);
  if (opt.char_p && ctx.file.char_p != *opt.char_p)
    ctx.warnings.push_back("--char " + std::to_string(*opt.char_p) + " overrides char " + std::to_string(ctx.file.char_p) + " from the file");

  int exit_code = 0;
  json result;
  try {
    if (ctx.char_p != 0 && !is_prime(ctx.char_p)) throw Error("BadCharacteristic", std::to_string(ctx.char_p) + " is neither zero nor prime");
    const std::string& c = opt.command;
    if (c == "validate") result = detail::cmd_validate(ctx, exit_code);
    else if (c == "info") result = detail::cmd_info(ctx);
    else if (c == "stabilize" || c == "tr") {
      detail::require_valid(ctx.file.p);
      const ParamTropicalCurve q = c == "tr" ? gamma_tr(ctx.file.p) : stabilize(ctx.file.p);
      result = detail::cmd_curve_out(ctx, q, out);
      if (result.is_null()) return 0;
    } else if (c == "fan") result = detail::cmd_fan(ctx);
    else if (c == "complex") result = detail::cmd_complex(ctx);
    else if (c == "regular") result = detail::cmd_regular(ctx);
    else if (c == "count") result = detail::cmd_count(ctx, false);
    else if (c == "count-elliptic") result = detail::cmd_count(ctx, true);
    else if (c == "stacky") result = detail::cmd_stacky(ctx);
    else result = detail::cmd_reduction_data(ctx);
  } catch (const Error& e) {
    report["warnings"] = ctx.warnings;
    return emit_error(e.code(), e.what(), 1);
  }
  report["warnings"] = ctx.warnings;
  report["result"] = result;
  report["status"] = exit_code == 0 ? "ok" : "invalid";
  if (exit_code != 0) report["error"] = {{"code", "ValidationFailed"}, {"message", "curve file has violations"}};
  if (opt.json_output) out << report.dump(2) << "\n";
  else detail::print_human(out, report);
  return exit_code;
}

}  // namespace tropicorr::cli
