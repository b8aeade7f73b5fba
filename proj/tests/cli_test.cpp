#include "support/fixtures.hpp"
#include "tropicorr/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tropicorr;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(TROPICORR_DATA_DIR) + "/" + name; }

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tropicorr_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write(const std::string& name, const json& doc) const { return write(name, doc.dump(2)); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static json load(const std::string& file) {
    std::ifstream in(file);
    return json::parse(in);
  }

  fs::path dir_;
};

}  // namespace

TEST(Cli, CountLineThroughPoints) {
  const Outcome r = run({"count", data("line2pts.json"), "--char", "0", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = r.report();
  EXPECT_EQ(rep["result"]["count"], "1");
  EXPECT_EQ(rep["result"]["factorization"], json({"1", "1"}));
  for (const auto& c : rep["result"]["cross_checks"]) EXPECT_TRUE(c["holds"].get<bool>());
  EXPECT_EQ(rep["status"], "ok");
}

TEST(Cli, DoubledLineCharacteristics) {
  const Outcome two = run({"count", data("dblline.json"), "--char", "2", "--json"});
  EXPECT_EQ(two.code, 1);
  EXPECT_EQ(two.report()["error"]["code"], "HypothesisFailed:char_ok");
  const Outcome human = run({"count", data("dblline.json"), "--char", "2"});
  EXPECT_EQ(human.code, 1);
  EXPECT_NE(human.err.find("HypothesisFailed:char_ok"), std::string::npos);

  const Outcome three = run({"count", data("dblline.json"), "--char", "3", "--json"});
  ASSERT_EQ(three.code, 0) << three.err;
  EXPECT_EQ(three.report()["result"]["count"], "4");
  EXPECT_EQ(three.report()["warnings"].size(), 1u);
}

TEST(Cli, ComplexReportsTorsion) {
  const Outcome r = run({"complex", data("dblline.json"), "--constrained", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["variants"]["CE"]["E2"], json({{"rank", 0}, {"torsion", {2, 2}}}));
  EXPECT_TRUE(r.report()["warnings"].empty());
  const Outcome unconstrained = run({"complex", data("dblline.json"), "--json"});
  ASSERT_EQ(unconstrained.code, 0);
  EXPECT_EQ(unconstrained.report()["warnings"].size(), 1u);
}

TEST(Cli, DigestIsSha256OfFileBytes) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::ifstream in(data("line2pts.json"), std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(run({"info", data("line2pts.json"), "--json"}).report()["input_sha256"], cli::sha256_hex(bytes));
}

TEST(Cli, EverySubcommandSucceedsAndIsDeterministic) {
  for (const std::string& c : cli::commands()) {
    if (c == "count-elliptic") continue;
    const std::vector<std::string> args{c, data("dblline.json"), "--json"};
    const Outcome a = run(args);
    ASSERT_EQ(a.code, 0) << c << ": " << a.err;
    EXPECT_EQ(run(args).out, a.out) << c;
    EXPECT_EQ(json::parse(a.out).dump(2) + "\n", a.out) << c;
  }
}

TEST(Cli, UsageAndParseErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus", data("line2pts.json")}).code, 2);
  EXPECT_EQ(run({"info", data("line2pts.json"), "--group", "R"}).code, 2);
  EXPECT_EQ(run({"info", "/nonexistent/curve.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BadCharacteristicIsDomainError) {
  const Outcome r = run({"stacky", data("line2pts.json"), "--char", "4", "--json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report()["error"]["code"], "BadCharacteristic");
}

TEST_F(CliFiles, MalformedFilesExitTwo) {
  const json good = load(data("line2pts.json"));
  json unknown = good;
  unknown["colour"] = "red";
  json no_schema = good;
  no_schema.erase("schema");
  json float_coord = good;
  float_coord["infinite_vertices"][2]["h"][0] = -1.5;
  json bad_rational = good;
  bad_rational["finite_vertices"][0]["h"][0] = "1/0";
  json short_point = good;
  short_point["constraints"][0]["point"] = {"1"};
  for (const auto& [name, doc] : std::vector<std::pair<std::string, json>>{
           {"unknown", unknown}, {"no_schema", no_schema}, {"float", float_coord}, {"rational", bad_rational}, {"short", short_point}}) {
    const Outcome r = run({"validate", write(name + ".json", doc), "--json"});
    EXPECT_EQ(r.code, 2) << name;
    EXPECT_EQ(r.report()["error"]["code"], "ParseError") << name;
  }
  EXPECT_EQ(run({"info", write("truncated.json", std::string("{\"schema\": "))}).code, 2);
}

TEST_F(CliFiles, ValidateReportsTwoValentInfiniteVertex) {
  json bad = load(data("line2pts.json"));
  bad["edges"].push_back({{"id", "extra"}, {"ends", {"v0", "d2"}}, {"length", "inf"}});
  const Outcome r = run({"validate", write("bad.json", bad), "--json"});
  EXPECT_EQ(r.code, 1);
  const json rep = r.report();
  EXPECT_FALSE(rep["result"]["valid"].get<bool>());
  EXPECT_FALSE(rep["result"]["violations"].empty());
  EXPECT_EQ(rep["error"]["code"], "ValidationFailed");
  EXPECT_EQ(run({"count", path("bad.json")}).code, 1);
}

TEST_F(CliFiles, CurveOutputsRoundTrip) {
  ParamTropicalCurve sub = extend_parameterization(fixture::line_through_points(2), {SubdivideBounded{"e1", {Rat(1, 3)}}});
  const std::string in = write("sub.json", io::to_json(io::CurveFile{sub, fixture::line_through_points_constraints(2), 0}));
  for (const std::string c : {"stabilize", "tr"}) {
    const Outcome stdout_run = run({c, in});
    ASSERT_EQ(stdout_run.code, 0) << stdout_run.err;
    const io::CurveFile f = io::parse_curve_file(stdout_run.out);
    EXPECT_TRUE(validate(f.p).ok()) << c;

    const std::string out = path(c + ".json");
    const Outcome file_run = run({c, in, "--out", out, "--json"});
    ASSERT_EQ(file_run.code, 0);
    std::ifstream is(out);
    const std::string written((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    EXPECT_EQ(written, stdout_run.out);
    EXPECT_EQ(file_run.report()["result"]["output_sha256"], cli::sha256_hex(written));

    const Outcome again = run({c, out});
    EXPECT_EQ(again.out, written) << c << " is idempotent";
    EXPECT_EQ(run({"count", out, "--json"}).report()["result"]["count"], "4");
  }
  EXPECT_EQ(io::parse_curve_file(run({"stabilize", in}).out).p.curve.finite_vertices.size(), 3u);
}

TEST_F(CliFiles, EllipticCountWarnsAboutJ) {
  const std::string f = write("triangle.json", io::to_json(io::CurveFile{fixture::marked_triangle(), fixture::marked_triangle_constraints(), 0}));
  const Outcome r = run({"count-elliptic", f, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["count"], "9");
  EXPECT_EQ(r.report()["warnings"].size(), 1u);
  EXPECT_EQ(run({"count-elliptic", f, "--char", "3"}).code, 1);
  EXPECT_EQ(run({"count-elliptic", data("line2pts.json"), "--json"}).report()["error"]["code"], "GenusNotOne");
  const Outcome info = run({"info", f, "--json"});
  EXPECT_EQ(info.report()["result"]["genus"], 1);
  EXPECT_TRUE(info.report()["result"].contains("tropical_j"));
}
