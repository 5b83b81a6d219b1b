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

// Command-line front end: argument grammar, operator loading, report files.

#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ritt/diagnostics.hpp"
#include "ritt/error.hpp"
#include "ritt/experiments.hpp"
#include "ritt/funcalc.hpp"
#include "ritt/holo.hpp"
#include "ritt/identities.hpp"
#include "ritt/io.hpp"
#include "ritt/squarefn.hpp"
#include "ritt/zoo.hpp"

namespace ritt::cli {

// ---------------------------------------------------------------------------
// Function grammar

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), Errc::bad_parameters, "bad number '" + whole + "'");
  return v;
}

/// "1.5", "-2", "1+2i", "0.5-3e-2i", "2i", "-i".
inline cplx parse_complex(const std::string& token) {
  const std::string s = trim(token);
  require(!s.empty(), Errc::bad_parameters, "empty coefficient");
  if (s.back() != 'i') return parse_real(s, token);
  const std::string body = s.substr(0, s.size() - 1);
  // split point: last sign that is not the start and not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : parse_real(re, token), parse_real(im, token)};
}

inline Poly parse_coefficients(const std::string& list) {
  Poly out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = list.find(',', start);
    out.push_back(parse_complex(list.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/// "poly:c0,c1,...", "rational:c0,../d0,..", "monomial:n", "cayley".
inline HoloFn parse_function(const std::string& text) {
  const std::string s = trim(text);
  if (s == "cayley") return HoloFn::cayley();
  const std::size_t colon = s.find(':');
  require(colon != std::string::npos, Errc::bad_parameters, "unknown function '" + text + "'");
  const std::string head = s.substr(0, colon);
  const std::string body = s.substr(colon + 1);
  if (head == "poly") return HoloFn::polynomial(parse_coefficients(body));
  if (head == "rational") {
    const std::size_t slash = body.find('/');
    require(slash != std::string::npos, Errc::bad_parameters, "rational needs num/den: '" + text + "'");
    const Poly den = parse_coefficients(body.substr(slash + 1));
    require(poly::trimmed(den) != Poly{0.0}, Errc::bad_parameters, "zero denominator in '" + text + "'");
    return HoloFn::rational(parse_coefficients(body.substr(0, slash)), den);
  }
  if (head == "monomial") {
    const double n = parse_real(trim(body), text);
    require(n >= 0.0 && n == std::floor(n) && n <= 1e6, Errc::bad_parameters, "bad monomial power in '" + text + "'");
    return HoloFn::monomial(static_cast<int>(n));
  }
  throw Error(Errc::bad_parameters, "unknown function '" + text + "'");
}

// ---------------------------------------------------------------------------
// Inputs and outputs

/// Either an explicit matrix {n, p, re, im} or a generator spec {kind, ...}.
inline Operator load_operator(const std::string& path) {
  const Json j = parse_json(read_text_file(path), path);
  if (j.is_object() && j.contains("kind")) return generate(zoo_from_json(j));
  return operator_from_json(j);
}

struct CliConfig {
  std::string subcommand;
  std::string op_path;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool seed_given = false;
  unsigned threads = 1;
  std::optional<double> tol;
};

/// Report text goes to out_dir/report.json when an output directory is set,
/// to stdout otherwise. CSV side files need the directory.
class ReportSink {
 public:
  ReportSink(std::string dir, std::ostream& out) : dir_(std::move(dir)), out_(out) {
    if (dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(Errc::io_failure, "cannot create '" + dir_ + "': " + ec.message());
  }

  void csv(const std::string& name, const std::string& text) {
    if (!dir_.empty()) write_text_file(path(name), text);
  }

  void report(const Json& j) {
    if (dir_.empty()) {
      out_ << dump_report(j);
      return;
    }
    write_text_file(path("report.json"), dump_report(j));
  }

 private:
  std::string path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

  std::string dir_;
  std::ostream& out_;
};

// ---------------------------------------------------------------------------
// Subcommands

struct DiagnoseArgs {
  bool rbound = false;
  int power_horizon = 200;
  int dd_horizon = 200;
  int rbound_family = 32;
  std::string sign = "rademacher";
};

inline void run_diagnose(const CliConfig& c, const DiagnoseArgs& a, std::ostream& out) {
  const Operator t = load_operator(c.op_path);
  DiagnosticsOptions o;
  o.power_horizon = a.power_horizon;
  o.dd_horizon = a.dd_horizon;
  if (c.tol) o.vertex_tol = *c.tol;
  o.with_rbound = a.rbound;
  o.rbound_family = a.rbound_family;
  o.rbound.seed = c.seed;
  o.rbound.sign_kind = a.sign == "gaussian" ? SignKind::gaussian : SignKind::rademacher;
  o.threads = c.threads;
  const DiagnosticsReport rep = diagnose(t, o);
  ReportSink sink(c.out_dir, out);
  sink.csv("ritt_constant.csv", rep.ritt.to_csv());
  sink.report(diagnostics_to_json(rep));
}

struct CalcArgs {
  std::string f;
  double theta = 0.0;
  std::string method = "contour";
};

inline void run_calc(const CliConfig& c, const CalcArgs& a, std::ostream& out) {
  const Operator t = load_operator(c.op_path);
  const HoloFn f = parse_function(a.f);
  const double tol = c.tol.value_or(1e-10);
  CalcOptions o;
  o.threads = c.threads;
  const CalcResult r = a.method == "contour"       ? calc_contour(t, f, a.theta, tol, o)
                       : a.method == "regularized" ? calc_regularized(t, f, a.theta, tol, o)
                                                   : calc_eigen_oracle(t, f);
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "calc";
  j["function"] = f.describe();
  j["method"] = calc_method_name(r.method);
  j["theta"] = number_or_null(r.contour_theta);
  j["tol"] = tol;
  j["quad_error_est"] = number_or_null(r.quad_error_est);
  j["nodes"] = r.nodes;
  j["norm_upper"] = number_or_null(matrix_norm_upper(r.value.matrix(), r.value.p()));
  j["value"] = operator_to_json(r.value);
  ReportSink sink(c.out_dir, out);
  sink.report(j);
}

struct SqfArgs {
  int m = 1;
  bool dual = false;
  bool lower = false;
  bool restrict_range = false;
  std::string method = "auto";
  int probes = 16;
  int samples = 4096;
  long long sequence_K = 0;
};

inline GammaMethod pick_gamma_method(const std::string& name, const Operator& t) {
  if (name == "hilbert_exact") return GammaMethod::hilbert_exact;
  if (name == "gaussian_mc") return GammaMethod::gaussian_mc;
  if (name == "rademacher_mc") return GammaMethod::rademacher_mc;
  return t.is_hilbert() ? GammaMethod::hilbert_exact : GammaMethod::gaussian_mc;
}

inline void run_sqf(const CliConfig& c, const SqfArgs& a, std::ostream& out) {
  const Operator t = load_operator(c.op_path);
  GammaOptions o;
  o.method = pick_gamma_method(a.method, t);
  o.samples = a.samples;
  o.seed = c.seed;
  o.threads = c.threads;
  if (c.tol) o.tail_rel = o.mc_tail_rel = *c.tol;
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "sqf";
  j["m"] = a.m;
  j["p"] = t.p();
  j["phi"] = sqf_norm_to_json(phi_m_norm(t, a.m, a.probes, o));
  j["phi_dual"] = a.dual ? sqf_norm_to_json(phi_m_dual_norm(t, a.m, a.probes, o)) : Json(nullptr);
  if (a.lower) {
    const LowerBound lb = lower_bound_check(t, a.m, a.probes, o, a.restrict_range);
    j["lower"] = {{"value", number_or_null(lb.value)},
                  {"zero", lb.zero},
                  {"restricted", lb.restricted},
                  {"truncation_K", lb.truncation_K},
                  {"tail_bound", number_or_null(lb.tail_bound)}};
  } else {
    j["lower"] = nullptr;
  }
  ReportSink sink(c.out_dir, out);
  if (a.sequence_K > 0) sink.csv("sequence.csv", sqf_sequence_csv(SqfSequence(t, a.m, Vector::Unit(t.dim(), 0)), a.sequence_K));
  sink.report(j);
}

struct SweepArgs {
  double omega = 2.0;
  int m = 1;
  int radii = 25;
  int angles = 20;
  double d_min = 1e-2;
  bool fit = true;
};

inline void run_sweep(const CliConfig& c, const SweepArgs& a, std::ostream& out) {
  StolzGrid g;
  g.radii = a.radii;
  g.angles = a.angles;
  g.d_min = a.d_min;
  BasisSweepOptions o;
  o.fit_exponent = a.fit;
  o.threads = c.threads;
  const BasisSweepSummary s = run_basis_sweep(a.omega, a.m, g, o);
  ReportSink sink(c.out_dir, out);
  sink.csv("sweep_canonical.csv", sweep_to_csv(s.canonical));
  sink.csv("sweep_riesz.csv", sweep_to_csv(s.riesz));
  sink.report(basis_sweep_to_json(s));
}

struct IdentityArgs {
  std::string suite = "all";
  long long K = 500;
};

inline void run_identities(const CliConfig& c, const IdentityArgs& a, std::ostream& out, std::ostream& log) {
  IdentityOptions o;
  o.K = a.K;
  o.seed = c.seed;
  o.threads = c.threads;
  const std::vector<IdentityReport> reps = run_identity_suite(a.suite, o);
  Json arr = Json::array();
  CsvTable table({"name", "verdict", "max_abs_deviation", "truncation_K", "tail_bound"});
  bool all = true;
  for (const IdentityReport& r : reps) {
    arr.push_back(identity_report_to_json(r));
    table.add_row({r.name, r.verdict(), CsvTable::num(r.max_abs_deviation), std::to_string(r.truncation_K),
                   CsvTable::num(r.tail_bound)});
    all = all && r.verified;
    log << r.name << ": " << r.verdict() << "\n";
  }
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "identities";
  j["suite"] = a.suite;
  j["K"] = a.K;
  j["seed"] = c.seed;
  j["all_verified"] = all;
  j["reports"] = arr;
  ReportSink sink(c.out_dir, out);
  sink.csv("identities.csv", table.str());
  sink.report(j);
}

inline void run_equivalence_cmd(const CliConfig& c, std::ostream& out) {
  EquivalenceConfig cfg = equivalence_config_from_json(parse_json(read_text_file(c.config_path), c.config_path));
  if (c.seed_given) cfg.params.seed = c.seed;
  cfg.params.threads = c.threads;
  const std::vector<EquivalenceRow> rows = run_equivalence(cfg.specs, cfg.params);
  ReportSink sink(c.out_dir, out);
  sink.csv("equivalence.csv", equivalence_to_csv(rows));
  sink.report(equivalence_to_json(rows, cfg.params));
}

// ---------------------------------------------------------------------------
// Entry point

/// Parses args (program name first) and runs one subcommand. Reports go to
/// out when no --out is given; everything else goes to log.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
  CLI::App app{"rittlab: numerical experiments on Ritt operators", args.empty() ? "ritt" : args.front()};
  app.require_subcommand(1);
  app.fallthrough();
  CliConfig c;
  app.add_option("--seed", c.seed, "master RNG seed")->capture_default_str();
  app.add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  auto* diag = app.add_subcommand("diagnose", "Ritt constant, power and dd bounds, classification");
  DiagnoseArgs da;
  diag->add_option("--op", c.op_path, "operator JSON (matrix or generator spec)")->required();
  diag->add_option("--out", c.out_dir, "output directory");
  diag->add_flag("--rbound", da.rbound, "estimate the R-bound of the power family");
  diag->add_option("--power-horizon", da.power_horizon, "N for max ||T^n||")->capture_default_str()->check(CLI::PositiveNumber);
  diag->add_option("--dd-horizon", da.dd_horizon, "K for max k||T^(k-1)(I-T)||")->capture_default_str()->check(CLI::PositiveNumber);
  diag->add_option("--rbound-family", da.rbound_family, "powers in the R-bound family")->capture_default_str()->check(CLI::PositiveNumber);
  diag->add_option("--sign", da.sign, "R-bound signs")->capture_default_str()->check(CLI::IsMember({"rademacher", "gaussian"}));
  diag->add_option("--vertex-tol", c.tol, "eigenvalues this close to 1 count as the vertex (default 1e-8)");

  auto* calc = app.add_subcommand("calc", "f(T) by contour integration");
  CalcArgs ca;
  calc->add_option("--op", c.op_path, "operator JSON")->required();
  calc->add_option("--out", c.out_dir, "output directory");
  calc->add_option("--f", ca.f, "poly:c0,c1,.. | rational:c0,../d0,.. | monomial:n | cayley")->required();
  calc->add_option("--theta", ca.theta, "contour Stolz angle parameter")->required();
  calc->add_option("--tol", c.tol, "quadrature tolerance (default 1e-10)");
  calc->add_option("--method", ca.method, "evaluation method")->capture_default_str()->check(CLI::IsMember({"contour", "regularized", "eigen"}));

  auto* sqf = app.add_subcommand("sqf", "square function norms");
  SqfArgs sa;
  sqf->add_option("--op", c.op_path, "operator JSON")->required();
  sqf->add_option("--out", c.out_dir, "output directory");
  sqf->add_option("--m", sa.m, "order m >= 1")->capture_default_str()->check(CLI::PositiveNumber);
  sqf->add_flag("--dual", sa.dual, "also compute the dual square function");
  sqf->add_flag("--lower", sa.lower, "also compute the lower bound");
  sqf->add_flag("--range-only", sa.restrict_range, "lower bound on the range of I - P_ker");
  sqf->add_option("--method", sa.method, "auto picks hilbert_exact for p = 2")->capture_default_str()->check(CLI::IsMember({"auto", "hilbert_exact", "gaussian_mc", "rademacher_mc"}));
  sqf->add_option("--probes", sa.probes, "random unit probes")->capture_default_str()->check(CLI::NonNegativeNumber);
  sqf->add_option("--samples", sa.samples, "Monte-Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  sqf->add_option("--sequence", sa.sequence_K, "write ||v_k|| for x = e_1, k <= K, to sequence.csv")->check(CLI::NonNegativeNumber);
  sqf->add_option("--tol", c.tol, "relative tail tolerance");

  auto* sweep = app.add_subcommand("basis-sweep", "l1 pairing sums over a Stolz grid");
  SweepArgs wa;
  sweep->add_option("--omega", wa.omega, "Stolz parameter > 1")->required();
  sweep->add_option("--m", wa.m, "order m >= 1")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--out", c.out_dir, "output directory");
  sweep->add_option("--radii", wa.radii, "radial grid levels")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--angles", wa.angles, "angles per level")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--d-min", wa.d_min, "closest approach to z = 1")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_flag("!--no-fit", wa.fit, "skip the canonical exponent fit");

  auto* ident = app.add_subcommand("verify-identities", "series identity audits");
  IdentityArgs ia;
  std::vector<std::string> suites = identity_suite_names();
  suites.push_back("all");
  ident->add_option("--suite", ia.suite, "suite name")->capture_default_str()->check(CLI::IsMember(suites));
  ident->add_option("--K", ia.K, "series truncation")->capture_default_str()->check(CLI::PositiveNumber);
  ident->add_option("--out", c.out_dir, "output directory");

  auto* eq = app.add_subcommand("equivalence", "equivalence table over generated operators");
  eq->add_option("--config", c.config_path, "experiment config JSON")->required();
  eq->add_option("--out", c.out_dir, "output directory");

  try {
    std::reverse(args.begin(), args.end());
    if (!args.empty()) args.pop_back();
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  c.seed_given = app.count("--seed") > 0;

  try {
    if (*diag) {
      run_diagnose(c, da, out);
    } else if (*calc) {
      run_calc(c, ca, out);
    } else if (*sqf) {
      run_sqf(c, sa, out);
    } else if (*sweep) {
      run_sweep(c, wa, out);
    } else if (*ident) {
      run_identities(c, ia, out, log);
    } else {
      run_equivalence_cmd(c, out);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    log << "error: out of memory\n";
    return 2;
  }
  if (!c.out_dir.empty()) log << "wrote " << c.out_dir << "\n";
  return 0;
}

inline int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace ritt::cli
