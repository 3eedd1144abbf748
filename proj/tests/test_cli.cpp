#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bellviol/cli.hpp"
#include "bellviol/correlation.hpp"
#include "bellviol/errors.hpp"
#include "bellviol/state_spec.hpp"

namespace bellviol {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("bellviol_cli_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(StateSpec, Forms) {
  EXPECT_LT(parse_state_spec("ghz:n=3,alpha=0.3").matrix().max_abs_diff(make_generalized_ghz(3, 0.3).matrix()), 1e-15);
  EXPECT_LT(parse_state_spec("ghz:n=3").matrix().max_abs_diff(make_generalized_ghz(3, std::numbers::pi / 4).matrix()), 1e-15);
  EXPECT_EQ(parse_state_spec("w:n=4").matrix().max_abs_diff(make_w(4).matrix()), 0.0);
  const WeightedState parts[] = {{0.25, make_w(3)}, {0.75, make_generalized_ghz(3, 0.2)}};
  EXPECT_LT(parse_state_spec("mixed:x=0.25,a=w:n=3,b=ghz:n=3,alpha=0.2").matrix().max_abs_diff(mix(parts).matrix()), 1e-15);
  EXPECT_LT(parse_state_spec("mixed:x=0.25,a=(w:n=3),b=(ghz:n=3,alpha=0.2)").matrix().max_abs_diff(mix(parts).matrix()),
            1e-15);
  const WeightedState noise[] = {{0.1, maximally_mixed(4)}, {0.9, make_w(4)}};
  EXPECT_LT(parse_state_spec("w4noise:x=0.1").matrix().max_abs_diff(mix(noise).matrix()), 1e-15);
}

TEST(StateSpec, NestedMixture) {
  const auto rho = parse_state_spec("mixed:x=0.5,a=(mixed:x=0.5,a=w:n=3,b=ghz:n=3),b=w:n=3");
  EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(rho(1, 2).real(), 0.75 / 3, 1e-15);
}

TEST(StateSpec, Errors) {
  for (const char* text : {"", "ghz", "ghz:n=", "ghz:n=3,beta=1", "w:n=three", "mixed:x=0.5,a=w:n=3", "foo:n=3",
                           "ghz:n=3,alpha=0.1)", "mixed:x=0.5,a=(w:n=3,b=w:n=3", "file:"}) {
    EXPECT_THROW(parse_state_spec(text), ParseError) << text;
  }
  try {
    parse_state_spec("ghz:n=3,beta=1");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos);
  }
  EXPECT_THROW(parse_state_spec("ghz:n=1"), ValidationError);
  EXPECT_THROW(parse_state_spec("mixed:x=1.5,a=w:n=3,b=w:n=3"), ValidationError);
  EXPECT_THROW(parse_state_spec("w4noise:x=-0.1"), ValidationError);
  EXPECT_THROW(parse_state_spec("mixed:x=0.5,a=w:n=3,b=w:n=4"), ValidationError);
}

TEST(Cli, ViolationFormulaGhz) {
  const CliRun r = run({"violation", "--state", "ghz:n=3,alpha=0.7853981634", "--operator", "recursive:N=3,k=3", "--method",
                     "formula"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("formula value: 1.414214"), std::string::npos) << r.out;
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, ViolationBothOnW4) {
  const CliRun r = run({"violation", "--state", "w:n=4", "--operator", "recursive:N=4,k=12", "--method", "both"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  double f = 0, o = 0, d = 1;
  for (const auto& line : lines_of(r.out)) {
    std::sscanf(line.c_str(), "formula value: %lf", &f);
    std::sscanf(line.c_str(), "oracle value: %lf", &o);
    std::sscanf(line.c_str(), "discrepancy: %lf", &d);
  }
  EXPECT_NEAR(f, 1.118, 1e-3);
  EXPECT_NEAR(o, 1.118, 1e-3);
  EXPECT_LE(d, 1e-3);
}

TEST(Cli, ViolationOracleForMabk) {
  const CliRun r = run({"violation", "--state", "ghz:n=3", "--operator", "mabk:N=3", "--method", "oracle", "--restarts", "8"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("oracle value: 2.000000"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  std::ofstream(dir / "rho.txt") << "qubits 1\n0.5,0 0,0\n0,0 0.5,0\n";
  std::ofstream(dir / "bad.txt") << "qubits 1\n0.5,0 0,0\n0,0 0.4,0\n";
  const std::string rho = "file:" + (dir / "rho.txt").string();
  const std::string bad = "file:" + (dir / "bad.txt").string();
  const std::string missing = "file:" + (dir / "nope.txt").string();

  CliRun r = run({"violation", "--state", rho, "--operator", "chsh", "--method", "formula"});
  EXPECT_EQ(r.code, kExitIncompatible);
  EXPECT_EQ(r.err.rfind("error:incompatible:", 0), 0u) << r.err;

  r = run({"violation", "--state", "ghz:n=3,zeta=1", "--operator", "recursive:N=3,k=3"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_EQ(r.err.rfind("error:parse:", 0), 0u);

  r = run({"violation", "--state", "ghz:n=3", "--operator", "recursive:N=3,k=9"});
  EXPECT_EQ(r.code, kExitParse);

  r = run({"violation", "--state", bad, "--operator", "mabk:N=1"});
  EXPECT_EQ(r.code, kExitParse);

  r = run({"tensor", "--state", bad});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(r.err.rfind("error:validation:", 0), 0u);
  EXPECT_NE(r.err.find("trace"), std::string::npos);

  r = run({"tensor", "--state", missing});
  EXPECT_EQ(r.code, kExitIo);
  EXPECT_EQ(r.err.rfind("error:io:", 0), 0u);

  r = run({"violation", "--state", "w:n=4", "--operator", "recursive:N=3,k=3", "--method", "formula"});
  EXPECT_EQ(r.code, kExitIncompatible);

  r = run({"violation", "--state", "w:n=3", "--operator", "recursive:N=3,k=3", "--restarts", "0"});
  EXPECT_EQ(r.code, kExitValidation);

  r = run({"frobnicate"});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_EQ(lines_of(r.err).size(), 1u);
}

TEST(Cli, ScanTwoPoints) {
  TempDir dir;
  const auto csv = dir / "two.csv";
  const CliRun r = run({"scan", "--family", "w-ghz-mix", "--operator", "recursive:N=3,k=3", "--points", "2", "--out",
                     csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto lines = lines_of(slurp(csv));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "x,f");
  EXPECT_EQ(lines[1].rfind("0,1.41421356", 0), 0u) << lines[1];
  EXPECT_EQ(lines[2].rfind("1,1.20185", 0), 0u) << lines[2];
}

TEST(Cli, ScanSerialIsByteIdentical) {
  TempDir dir;
  const std::vector<std::string> base = {"scan", "--family", "w4-white-noise", "--operator", "recursive:N=4,k=12",
                                         "--points", "6", "--serial", "--seed", "11", "--out"};
  auto a = base, b = base;
  a.push_back((dir / "a.csv").string());
  b.push_back((dir / "b.csv").string());
  ASSERT_EQ(run(a).code, kExitOk);
  ASSERT_EQ(run(b).code, kExitOk);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(lines_of(slurp(dir / "a.csv")).size(), 7u);
}

TEST(Cli, ScanErrors) {
  TempDir dir;
  const std::string out = (dir / "x.csv").string();
  EXPECT_EQ(run({"scan", "--family", "nope", "--operator", "recursive:N=3,k=3", "--out", out}).code, kExitParse);
  EXPECT_EQ(run({"scan", "--family", "w-ghz-mix", "--operator", "recursive:N=3,k=3", "--points", "1", "--out", out}).code,
            kExitParse);
  EXPECT_EQ(run({"scan", "--family", "w-ghz-mix", "--operator", "mabk:N=3", "--out", out}).code, kExitIncompatible);
  EXPECT_EQ(run({"scan", "--family", "w-ghz-mix", "--operator", "recursive:N=4,k=12", "--out", out}).code,
            kExitIncompatible);
  EXPECT_EQ(run({"scan", "--family", "w-ghz-mix", "--operator", "recursive:N=3,k=3", "--points", "2", "--out",
                 (dir / "missing" / "x.csv").string()})
                .code,
            kExitIo);
}

TEST(Cli, TensorDumpGhz) {
  const CliRun r = run({"tensor", "--state", "ghz:n=3,alpha=0.7853981634"});
  ASSERT_EQ(r.code, kExitOk);
  std::vector<std::string> data;
  for (const auto& line : lines_of(r.out))
    if (line.rfind("#", 0) != 0) data.push_back(line);
  EXPECT_EQ(data.size(), 64u);
  EXPECT_EQ(data[0], "0 0 0 0.125");
  EXPECT_NE(r.out.find("# check: 2^N * T(0,...,0) = 1"), std::string::npos);
}

TEST(Cli, TensorDumpMaximallyMixedHasOneNonzero) {
  TempDir dir;
  const auto path = dir / "t.txt";
  const CliRun r = run({"tensor", "--state", "w4noise:x=1", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk);
  int nonzero = 0, total = 0;
  for (const auto& line : lines_of(slurp(path))) {
    if (line.rfind("#", 0) == 0) continue;
    ++total;
    std::istringstream in(line);
    int i;
    double v;
    for (int q = 0; q < 4; ++q) in >> i;
    in >> v;
    if (v != 0.0) ++nonzero;
  }
  EXPECT_EQ(total, 256);
  EXPECT_EQ(nonzero, 1);
}

TEST(Cli, TensorDumpReconstructsState) {
  const std::string spec = "mixed:x=0.3,a=w:n=3,b=ghz:n=3,alpha=0.4";
  const CliRun r = run({"tensor", "--state", spec});
  ASSERT_EQ(r.code, kExitOk);
  std::vector<double> entries(64);
  for (const auto& line : lines_of(r.out)) {
    if (line.rfind("#", 0) == 0) continue;
    std::istringstream in(line);
    int idx[3];
    double v;
    in >> idx[0] >> idx[1] >> idx[2] >> v;
    entries[CorrelationTensor::flat_index(idx)] = v;
  }
  const auto rho = reconstruct_density(CorrelationTensor(3, entries));
  EXPECT_LT(rho.matrix().max_abs_diff(parse_state_spec(spec).matrix()), 1e-10);
}

TEST(Cli, AuditSingleSamplePasses) {
  const CliRun r = run({"audit", "--n", "3", "--samples", "1", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("samples=1"), std::string::npos);
  EXPECT_NE(r.out.find("result: PASS"), std::string::npos);
}

TEST(Cli, AuditZeroBudgetFails) {
  const CliRun r = run({"audit", "--n", "3", "--samples", "1", "--seed", "7", "--budget", "0"});
  EXPECT_EQ(r.code, kExitAudit);
  EXPECT_NE(r.out.find("result: FAIL"), std::string::npos);
  EXPECT_EQ(r.err.rfind("error:audit:", 0), 0u) << r.err;
}

TEST(Cli, AuditRejectsBadN) {
  EXPECT_EQ(run({"audit", "--n", "5", "--samples", "1"}).code, kExitValidation);
}

}  // namespace
}  // namespace bellviol
