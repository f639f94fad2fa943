#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncf/cli.hpp"

using namespace ncf;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "ncf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("ncf_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& body) const {
    fs::path p = path_ / name;
    std::ofstream(p) << body;
    return p;
  }

 private:
  fs::path path_;
};

// 0-based E_kl (x) E_pq in M_n (x) M_n.
ComplexMatrix unit2(Index n, Index k, Index l, Index p, Index q) { return kron(matrix_unit(n, k, l), matrix_unit(n, p, q)); }

}  // namespace

TEST(CliInfo, MatrixPairConstants) {
  auto r = run({"info", "--model", "matrix-pair:1,3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_NEAR(j["delta2"].get<double>(), 9.0, 1e-12);
  EXPECT_NEAR(j["kappa_plus"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(j["kappa_minus"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(j["dim_plus"].get<Index>(), 81);
  EXPECT_EQ(j["dim_minus"].get<Index>(), 81);
  EXPECT_NEAR(j["tr_e1"].get<double>(), 1.0 / 9.0, 1e-14);
  EXPECT_NEAR(j["tr_e2"].get<double>(), 1.0 / 9.0, 1e-14);
}

TEST(CliInfo, CyclicHasNoTower) {
  auto r = run({"info", "--model", "cyclic:5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_NEAR(j["delta2"].get<double>(), 5.0, 1e-12);
  EXPECT_TRUE(j["kappa_declared"].get<bool>());
  EXPECT_TRUE(j["tr_e1"].is_null());
  EXPECT_FALSE(j["assumptions"].empty());
  auto t = run({"info", "--model", "cyclic:5"});
  EXPECT_NE(t.out.find("(declared)"), std::string::npos);
  EXPECT_NE(t.out.find("n/a"), std::string::npos);
}

TEST(CliInfo, GenericMatchesClosedForm) {
  json g = json::parse(run({"info", "--model", "generic:2", "--format", "json"}).out);
  json m = json::parse(run({"info", "--model", "matrix-pair:1,2", "--format", "json"}).out);
  for (const char* k : {"delta2", "kappa_plus", "kappa_minus", "tr_e1", "tr_e2"})
    EXPECT_NEAR(g[k].get<double>(), m[k].get<double>(), 1e-8) << k;
  EXPECT_EQ(g["dim_plus"], m["dim_plus"]);
  EXPECT_EQ(g["dim_minus"], m["dim_minus"]);
}

TEST(CliTransform, ForwardOfJonesProjection) {
  TempDir d;
  ComplexMatrix e1 = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) e1 += unit2(2, i, j, i, j) / 2.0;
  auto f = d.write("e1.json", matrix_to_json(e1).dump());
  auto r = run({"transform", "--model", "matrix-pair:1,2", "forward", f.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["side"], "A' cap A2");
  ComplexMatrix got = matrix_from_json(j["matrix"]);
  EXPECT_LT(max_abs(got - identity(8) / 2.0), 1e-12);
}

TEST(CliTransform, RotationOfMatrixUnitAndRoundTrip) {
  TempDir d;
  // E_12 (x) E_31 -> E_13 (x) E_21 in 1-based labels, n = 3.
  auto f = d.write("x.json", json{{"matrix", matrix_to_json(unit2(3, 0, 1, 2, 0))}}.dump());
  auto r = run({"transform", "--model", "matrix-pair:1,3", "rho+", f.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ComplexMatrix got = matrix_from_json(json::parse(r.out)["matrix"]);
  EXPECT_LT(max_abs(got - unit2(3, 0, 2, 1, 0)), 1e-12);

  auto fwd = run({"transform", "--model", "matrix-pair:1,3", "forward", f.string()});
  ASSERT_EQ(fwd.code, 0) << fwd.err;
  auto g = d.write("fx.json", json{{"coefficients", json::parse(fwd.out)["coefficients"]}}.dump());
  auto back = run({"transform", "--model", "matrix-pair:1,3", "inverse", g.string()});
  ASSERT_EQ(back.code, 0) << back.err;
  EXPECT_LT(max_abs(matrix_from_json(json::parse(back.out)["matrix"]) - unit2(3, 0, 1, 2, 0)), 1e-12);
}

TEST(CliTransform, ConvolveTakesTwoFiles) {
  TempDir d;
  auto one = d.write("one.json", matrix_to_json(identity(4)).dump());
  auto r = run({"transform", "--model", "matrix-pair:1,2", "convolve", one.string(), one.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  // Elementary-tensor rule with A = B = C = D = 1: alpha = 1, so 1 * 1 = n 1 = 2 1.
  EXPECT_LT(max_abs(matrix_from_json(json::parse(r.out)["matrix"]) - 2.0 * identity(4)), 1e-12);
  EXPECT_EQ(run({"transform", "--model", "matrix-pair:1,2", "convolve", one.string()}).code, kExitMalformed);
}

TEST(CliExit, ErrorClasses) {
  TempDir d;
  Rng rng(3);
  ComplexMatrix x(8, 8);
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) x(i, j) = rng.complex_normal();
  auto bad = d.write("bad.json", matrix_to_json(x).dump());
  EXPECT_EQ(run({"transform", "--model", "matrix-pair:2,2", "forward", bad.string()}).code, kExitSpan);
  auto junk = d.write("junk.json", "{not json");
  EXPECT_EQ(run({"transform", "--model", "matrix-pair:2,2", "forward", junk.string()}).code, kExitMalformed);
  auto shape = d.write("shape.json", R"({"rows": 2, "cols": 2, "data": [[1, 0]]})");
  EXPECT_EQ(run({"transform", "--model", "matrix-pair:2,2", "forward", shape.string()}).code, kExitMalformed);
  EXPECT_EQ(run({"transform", "--model", "matrix-pair:2,2", "sideways", bad.string()}).code, kExitMalformed);
  EXPECT_EQ(run({"info", "--model", "matrix-pair:1,1"}).code, kExitBuild);
  EXPECT_EQ(run({"info", "--model", "cyclic:1"}).code, kExitBuild);
  EXPECT_EQ(run({"info", "--model", "torus:2"}).code, kExitMalformed);
  EXPECT_EQ(run({"info", "--bogus"}).code, kExitMalformed);
  EXPECT_EQ(run({"verify", "--model", "cyclic:3", "--trials", "0"}).code, kExitMalformed);
  EXPECT_EQ(run({"verify", "--model", "cyclic:3", "--seed", "12x"}).code, kExitMalformed);
  EXPECT_EQ(run({"info", "--config", (d.path() / "missing.json").string()}).code, kExitMalformed);
}

TEST(CliVerify, WritesReportsAtomically) {
  TempDir d;
  fs::path out = d.path() / "run";
  fs::create_directories(out);
  auto r = run({"verify", "--model", "matrix-pair:1,2", "--trials", "12", "--format", "json,csv,text", "--out",
                out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.json", "report.csv", "report.txt"}) EXPECT_TRUE(fs::exists(out / f)) << f;
  for (const auto& e : fs::directory_iterator(out)) EXPECT_EQ(e.path().string().find(".tmp"), std::string::npos);
  json j = read_json_file(out / "report.json");
  auto back = report_from_json(j);
  EXPECT_EQ(back.violations, 0);
  EXPECT_EQ(back.trials, 12);
  EXPECT_EQ(report_to_json(back).dump(), j.dump());
  EXPECT_FALSE(r.out.empty());
}

TEST(CliVerify, ZeroToleranceReportsViolations) {
  EXPECT_EQ(run({"verify", "--model", "matrix-pair:1,2", "--trials", "6", "--tol", "0"}).code, kExitViolation);
}

TEST(CliVerify, CyclicReportCarriesAssumption) {
  auto r = run({"verify", "--model", "cyclic:4", "--trials", "8", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  auto rep = report_from_json(j);
  ASSERT_FALSE(rep.assumptions.empty());
  ASSERT_FALSE(rep.records.empty());
  EXPECT_FALSE(rep.records.front().notes.empty());
}

TEST(CliVerify, SeedPrecedence) {
  auto seed_of = [](const CliResult& r) { return report_from_json(json::parse(r.out)).master_seed; };
  std::vector<std::string> base = {"verify", "--model", "cyclic:3", "--trials", "2", "--format", "json"};
  ::setenv("NCF_SEED", "77", 1);
  EXPECT_EQ(seed_of(run(base)), 77u);
  auto with_flag = base;
  with_flag.insert(with_flag.end(), {"--seed", "0x10"});
  EXPECT_EQ(seed_of(run(with_flag)), 16u);
  ::unsetenv("NCF_SEED");
  EXPECT_EQ(seed_of(run(base)), SampleSpec{}.master_seed);
}

TEST(CliConfig, RelativeAlgebraFilesAndOutputDir) {
  TempDir d;
  fs::create_directories(d.path() / "alg");
  std::ofstream(d.path() / "alg" / "b.json") << algebra_to_json(MatrixAlgebra::scalars(2, "C")).dump();
  std::ofstream(d.path() / "alg" / "a.json") << algebra_to_json(MatrixAlgebra::full(2, "M2")).dump();
  json cfg = {{"model", {{"family", "generic"}, {"algebra_files", {{"B", "alg/b.json"}, {"A", "alg/a.json"}}}}},
              {"sample", {{"trials", 4}, {"exponents", {2, "4/3", "inf"}}, {"kinds", {"gaussian", "unitary"}}}},
              {"output", {{"dir", "out"}, {"formats", {"json"}}}}};
  auto c = d.write("cfg.json", cfg.dump());
  fs::create_directories(d.path() / "out");
  auto r = run({"verify", "--config", c.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = read_json_file(d.path() / "out" / "report.json");
  EXPECT_NEAR(j["constants"]["delta2"].get<double>(), 4.0, 1e-10);
  auto parsed = config_from_json(cfg, d.path());
  EXPECT_EQ(parsed.sample.kinds.size(), 2u);
  ASSERT_EQ(parsed.sample.exponents.size(), 3u);
  EXPECT_NEAR(parsed.sample.exponents[1], 4.0 / 3.0, 1e-15);
  EXPECT_EQ(parsed.sample.exponents[2], kInf);
  EXPECT_THROW(config_from_json(json{{"sample", {{"trials", "many"}}}}), MalformedInput);
}

TEST(CliOracle, GenericAgainstClosedForm) {
  auto r = run({"oracle", "--model", "generic:2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_TRUE(j.contains("items"));
  for (const auto& i : j["items"]) EXPECT_TRUE(i["pass"].get<bool>()) << i.dump();
  EXPECT_EQ(run({"oracle", "--model", "matrix-pair:1,2"}).code, 0);
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
  TempDir d;
  fs::path p = d.path() / "f.txt";
  atomic_write(p, "first");
  atomic_write(p, "second");
  std::ifstream in(p);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(s, "second");
  Index entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d.path())) ++entries;
  EXPECT_EQ(entries, 1);
  atomic_write(d.path() / "nested" / "g.txt", "x");
  EXPECT_TRUE(fs::exists(d.path() / "nested" / "g.txt"));
}

TEST(CliBinary, RunsAsProcess) {
  const char* bin = std::getenv("NCF_CLI");
  if (!bin || !*bin) GTEST_SKIP() << "NCF_CLI not set";
  TempDir d;
  std::string cmd = std::string(bin) + " info --model matrix-pair:1,2 --format json > " + (d.path() / "o.json").string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_NEAR(read_json_file(d.path() / "o.json")["delta2"].get<double>(), 4.0, 1e-12);
  std::string bad = std::string(bin) + " info --model matrix-pair:1,1 2>/dev/null";
  int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitBuild);
}
