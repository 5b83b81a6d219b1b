/*
   Copyright 2026 The rittlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ritt/cli.hpp"

using namespace ritt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("rittlab_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct CliRun {
  int code;
  std::string out;
  std::string log;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "ritt");
  std::ostringstream out, log;
  const int code = cli::run(args, out, log);
  return {code, out.str(), log.str()};
}

std::string write(const fs::path& dir, const std::string& name, const std::string& text) {
  const std::string p = (dir / name).string();
  write_text_file(p, text);
  return p;
}

}  // namespace

TEST(CliGrammar, ComplexCoefficients) {
  EXPECT_EQ(cli::parse_complex("1.5"), cplx(1.5, 0.0));
  EXPECT_EQ(cli::parse_complex("-2"), cplx(-2.0, 0.0));
  EXPECT_EQ(cli::parse_complex("1+2i"), cplx(1.0, 2.0));
  EXPECT_EQ(cli::parse_complex("0.5-3e-2i"), cplx(0.5, -0.03));
  EXPECT_EQ(cli::parse_complex("2i"), cplx(0.0, 2.0));
  EXPECT_EQ(cli::parse_complex("-i"), cplx(0.0, -1.0));
  EXPECT_EQ(cli::parse_complex("1e-3+i"), cplx(1e-3, 1.0));
  EXPECT_THROW(cli::parse_complex("abc"), Error);
  EXPECT_THROW(cli::parse_complex("1+2j"), Error);
}

TEST(CliGrammar, Functions) {
  const HoloFn p = cli::parse_function("poly:0,1");
  EXPECT_EQ(p(cplx(0.3, 0.1)), cplx(0.3, 0.1));
  const HoloFn q = cli::parse_function("poly:1,0,1+1i");
  EXPECT_NEAR(std::abs(q(0.5) - (1.0 + cplx(0.25, 0.25))), 0.0, 1e-15);
  const HoloFn r = cli::parse_function("rational:1/2,-1");
  EXPECT_NEAR(std::abs(r(0.5) - 2.0 / 3.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cli::parse_function("monomial:3")(0.5) - 0.125), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cli::parse_function("cayley")(0.5) - 1.0 / 3.0), 0.0, 1e-15);
  EXPECT_EQ(cli::parse_function("poly:0,1").describe(), "poly:0,1");

  for (const char* bad : {"exp", "poly:", "rational:1,2", "rational:1/0", "monomial:-1", "monomial:1.5", "sin:1"}) {
    try {
      cli::parse_function(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::bad_parameters) << bad;
    }
  }
}

TEST(CliExitCodes, RotationDiagnose) {
  const fs::path d = scratch("diag");
  const std::string op = write(d, "op.json", R"({"kind":"rotation","phi":1.5707963267948966})");
  const CliRun r = run({"diagnose", "--op", op, "--out", (d / "r").string()});
  ASSERT_EQ(r.code, 0) << r.log;
  EXPECT_TRUE(r.out.empty());
  const Json j = parse_json(read_text_file((d / "r" / "report.json").string()), "report");
  EXPECT_EQ(j.at("schema"), kSchemaVersion);
  EXPECT_EQ(j.at("classification"), "PowerBoundedNotRitt");
  EXPECT_TRUE(fs::exists(d / "r" / "ritt_constant.csv"));
}

TEST(CliExitCodes, LemmaSuiteVerified) {
  const CliRun r = run({"verify-identities", "--suite", "lemma", "--K", "500"});
  ASSERT_EQ(r.code, 0) << r.log;
  const Json j = parse_json(r.out, "stdout");
  EXPECT_TRUE(j.at("all_verified").get<bool>());
  EXPECT_EQ(j.at("reports").at(0).at("verdict"), "verified");
}

TEST(CliExitCodes, SpectrumOutsideIsNumericalFailure) {
  const fs::path d = scratch("calc");
  const std::string op = write(d, "op.json", R"({"kind":"rotation","phi":1.0})");
  const CliRun r = run({"calc", "--op", op, "--f", "poly:0,1", "--theta", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.log.find("SpectrumOutsideContour"), std::string::npos);
}

TEST(CliExitCodes, ArgumentAndIoFailures) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"calc", "--op", "x.json"}).code, 1);
  EXPECT_EQ(run({"verify-identities", "--suite", "nope"}).code, 1);
  EXPECT_EQ(run({"verify-identities", "--unknown-flag"}).code, 1);
  EXPECT_EQ(run({"diagnose", "--op", "/nonexistent/op.json"}).code, 3);
  EXPECT_EQ(run({"--help"}).code, 0);

  const fs::path d = scratch("keys");
  const std::string bad = write(d, "op.json", R"({"kind":"rotation","phi":1.0,"color":"red"})");
  EXPECT_EQ(run({"diagnose", "--op", bad}).code, 1);
  const std::string cfg = write(d, "cfg.json", R"({"specs":[],"extra":1})");
  EXPECT_EQ(run({"equivalence", "--config", cfg}).code, 1);
  const std::string empty = write(d, "empty.json", R"({"specs":[]})");
  EXPECT_EQ(run({"equivalence", "--config", empty}).code, 1);
}

TEST(CliCalc, MatrixOperatorRoundTrip) {
  const fs::path d = scratch("calc_rt");
  Matrix m(2, 2);
  m << cplx(0.5), cplx(0.1), cplx(0.0), cplx(0.25);
  const std::string op = write(d, "op.json", dump_report(operator_to_json(Operator(m))));
  const CliRun r = run({"calc", "--op", op, "--f", "poly:1,0,-1", "--theta", "3", "--out", (d / "r").string()});
  ASSERT_EQ(r.code, 0) << r.log;
  const Json j = parse_json(read_text_file((d / "r" / "report.json").string()), "report");
  const Operator v = operator_from_json(j.at("value"));
  const Matrix expect = Matrix::Identity(2, 2) - m * m;
  EXPECT_LT((v.matrix() - expect).norm(), 1e-9);
  EXPECT_EQ(dump_report(j), read_text_file((d / "r" / "report.json").string()));
}

TEST(CliSqf, DiagonalHalf) {
  const fs::path d = scratch("sqf");
  Matrix m = Matrix::Identity(2, 2) * 0.5;
  const std::string op = write(d, "op.json", dump_report(operator_to_json(Operator(m))));
  const CliRun r = run({"sqf", "--op", op, "--m", "1", "--dual", "--lower", "--sequence", "10", "--out",
                     (d / "r").string()});
  ASSERT_EQ(r.code, 0) << r.log;
  const Json j = parse_json(read_text_file((d / "r" / "report.json").string()), "report");
  EXPECT_NEAR(j.at("phi").at("value").get<double>(), 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(j.at("lower").at("value").get<double>(), 2.0 / 3.0, 1e-10);
  const std::string csv = read_text_file((d / "r" / "sequence.csv").string());
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST(CliEquivalence, ThreadCountIndependent) {
  const fs::path d = scratch("eq");
  const std::string cfg = write(d, "cfg.json", R"({
    "specs": [{"kind":"diag_in_stolz","omega":2,"n":8,"seed":7},{"kind":"rotation","phi":1.5707963267948966}],
    "seed": 3,
    "budgets": {"hinf": 8, "rbound_family": 8, "rbound_trials": 8, "rbound_vectors": 32, "probes": 4, "mc_samples": 256}
  })");
  ASSERT_EQ(run({"--threads", "1", "equivalence", "--config", cfg, "--out", (d / "a").string()}).code, 0);
  ASSERT_EQ(run({"equivalence", "--config", cfg, "--out", (d / "b").string(), "--threads", "3"}).code, 0);
  const std::string a = read_text_file((d / "a" / "report.json").string());
  EXPECT_EQ(a, read_text_file((d / "b" / "report.json").string()));
  EXPECT_EQ(read_text_file((d / "a" / "equivalence.csv").string()),
            read_text_file((d / "b" / "equivalence.csv").string()));
  const Json j = parse_json(a, "report");
  EXPECT_EQ(j.at("kind"), "equivalence");
  EXPECT_EQ(j.at("rows").size(), 2u);

  ASSERT_EQ(run({"--seed", "9", "equivalence", "--config", cfg, "--out", (d / "c").string()}).code, 0);
  const Json c = parse_json(read_text_file((d / "c" / "report.json").string()), "report");
  EXPECT_EQ(c.at("params").at("seed"), 9);
}

TEST(CliBasisSweep, SmallGrid) {
  const fs::path d = scratch("sweep");
  const CliRun r = run({"basis-sweep", "--omega", "2", "--m", "1", "--radii", "4", "--angles", "3", "--no-fit", "--out",
                     (d / "r").string()});
  ASSERT_EQ(r.code, 0) << r.log;
  const Json j = parse_json(read_text_file((d / "r" / "report.json").string()), "report");
  EXPECT_EQ(j.at("points"), 12);
  EXPECT_TRUE(j.at("canonical_exponent").is_null());
  EXPECT_TRUE(fs::exists(d / "r" / "sweep_riesz.csv"));
  EXPECT_EQ(run({"basis-sweep", "--omega", "0.5"}).code, 1);
}
