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

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ritt/basis.hpp"
#include "ritt/diagnostics.hpp"
#include "ritt/funcalc.hpp"
#include "ritt/io.hpp"
#include "ritt/parallel.hpp"
#include "ritt/squarefn.hpp"
#include "ritt/zoo.hpp"

namespace ritt {

// ---------------------------------------------------------------------------
// Equivalence table

/// A table cell: a finite value or a flag naming why there is none.
struct Column {
  std::optional<double> value;
  double stderr_ = 0.0;
  std::string flag;  ///< empty when the value is finite and unflagged

  bool finite() const { return value.has_value() && std::isfinite(*value) && flag.empty(); }
};

struct EquivalenceRow {
  std::string operator_id;
  StolzType stolz_type;
  double ritt_constant = 0.0;
  bool ritt_growing = false;
  Column hinf;
  Column phi1;
  Column phi1_dual;
  Column phi2;
  Column rbound_powers;
  Column rbound_dd;
  Classification classification = Classification::inconclusive;
  bool implications_hold = false;
};

struct EquivalenceParams {
  std::optional<double> p;  ///< overrides the exponent of every spec
  double nu = 3.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int hinf_budget = 32;
  int rbound_family = 32;
  int rbound_trials = 64;
  int rbound_vectors = 256;
  int probes = 16;
  int mc_samples = 4096;
  int power_horizon = 200;
  int dd_horizon = 200;
  RittGrid grid;
};

inline std::uint64_t row_seed(std::uint64_t seed, std::size_t row) { return derive_key(seed, row); }

/// Square-function options used for a row: exact Gram norms on l^2, Gaussian
/// sampling otherwise.
inline GammaOptions row_gamma_options(const EquivalenceParams& params, double p, std::size_t row) {
  GammaOptions o;
  o.method = p == 2.0 ? GammaMethod::hilbert_exact : GammaMethod::gaussian_mc;
  o.samples = params.mc_samples;
  o.seed = row_seed(params.seed, row);
  o.threads = 1;
  return o;
}

namespace detail {

template <class Fn>
Column guarded(Fn&& fn) {
  Column c;
  try {
    fn(c);
  } catch (const Error& e) {
    c.value.reset();
    c.flag = std::string(errc_name(e.code()));
  }
  return c;
}

inline Operator with_exponent(const Operator& t, const std::optional<double>& p) {
  return p ? Operator(t.matrix(), *p) : t;
}

}  // namespace detail

inline EquivalenceRow equivalence_row(const ZooSpec& spec, const EquivalenceParams& params, std::size_t row) {
  const Operator t = detail::with_exponent(generate(spec), params.p);
  const std::uint64_t seed = row_seed(params.seed, row);
  EquivalenceRow r;
  r.operator_id = spec.id();
  r.stolz_type = stolz_type_of_spectrum(t);
  const RittConstantReport rc = ritt_constant(t, params.grid, 1);
  r.ritt_constant = rc.value;
  r.ritt_growing = rc.growing;
  const PowerBound pb = power_bound(t, params.power_horizon);
  const DdBound dd = dd_bound(t, params.dd_horizon);
  r.classification = classify(pb, dd);

  r.hinf = detail::guarded([&](Column& c) {
    c.value = hinf_constant_estimate(t, params.nu, params.hinf_budget, {}, seed, 1).value;
  });
  const GammaOptions go = row_gamma_options(params, t.p(), row);
  auto sqf = [&](int m, bool dual) {
    return detail::guarded([&](Column& c) {
      const SqfNorm s = dual ? phi_m_dual_norm(t, m, params.probes, go) : phi_m_norm(t, m, params.probes, go);
      c.value = s.value;
      c.stderr_ = s.stderr_;
    });
  };
  r.phi1 = sqf(1, false);
  r.phi1_dual = sqf(1, true);
  r.phi2 = sqf(2, false);

  RBoundOptions ro;
  ro.trials = params.rbound_trials;
  ro.vectors_per_trial = params.rbound_vectors;
  ro.seed = seed;
  ro.threads = 1;
  auto rbound = [&](const std::vector<Operator>& family, bool divergent) {
    Column c = detail::guarded([&](Column& cc) {
      const RBoundEstimate e = rbound_estimate(family, ro);
      cc.value = e.value;
      cc.stderr_ = e.stderr_;
    });
    if (divergent && c.flag.empty()) c.flag = "divergent";
    return c;
  };
  r.rbound_powers = rbound(power_family(t, params.rbound_family), pb.overflow || pb.growing);
  r.rbound_dd = rbound(dd_family(t, params.rbound_family), pb.overflow || pb.growing || dd.trend > kTrendTolerance);

  const bool all_finite = r.hinf.finite() && r.phi1.finite() && r.phi1_dual.finite() && r.phi2.finite() &&
                          r.rbound_powers.finite() && r.rbound_dd.finite();
  r.implications_hold = r.classification == Classification::ritt_likely ? all_finite : !all_finite;
  return r;
}

/// One row per spec, rows computed independently and emitted in input order.
inline std::vector<EquivalenceRow> run_equivalence(const std::vector<ZooSpec>& specs, const EquivalenceParams& params) {
  require(!specs.empty(), Errc::empty_family, "no operator specs");
  std::vector<EquivalenceRow> rows(specs.size());
  parallel_for(specs.size(), params.threads, [&](std::size_t i) { rows[i] = equivalence_row(specs[i], params, i); });
  return rows;
}

inline Json column_to_json(const Column& c) {
  Json j;
  j["value"] = c.value ? number_or_null(*c.value) : Json(nullptr);
  j["stderr"] = number_or_null(c.stderr_);
  j["flag"] = c.flag.empty() ? Json(nullptr) : Json(c.flag);
  return j;
}

inline Json equivalence_params_to_json(const EquivalenceParams& p) {
  return Json{{"p", p.p ? Json(*p.p) : Json(nullptr)},
              {"nu", p.nu},
              {"seed", p.seed},
              {"budgets",
               {{"hinf", p.hinf_budget},
                {"rbound_family", p.rbound_family},
                {"rbound_trials", p.rbound_trials},
                {"rbound_vectors", p.rbound_vectors},
                {"probes", p.probes},
                {"mc_samples", p.mc_samples},
                {"power_horizon", p.power_horizon},
                {"dd_horizon", p.dd_horizon}}}};
}

inline Json equivalence_to_json(const std::vector<EquivalenceRow>& rows, const EquivalenceParams& params) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "equivalence";
  j["params"] = equivalence_params_to_json(params);
  Json arr = Json::array();
  for (const EquivalenceRow& r : rows) {
    arr.push_back({{"operator_id", r.operator_id},
                   {"stolz_type", r.stolz_type.infinite ? Json("inf") : number_or_null(r.stolz_type.value)},
                   {"ritt_constant", number_or_null(r.ritt_constant)},
                   {"ritt_growing", r.ritt_growing},
                   {"hinf_estimate", column_to_json(r.hinf)},
                   {"phi1_norm", column_to_json(r.phi1)},
                   {"phi1_dual_norm", column_to_json(r.phi1_dual)},
                   {"phi2_norm", column_to_json(r.phi2)},
                   {"rbound_powers", column_to_json(r.rbound_powers)},
                   {"rbound_dd", column_to_json(r.rbound_dd)},
                   {"classification", classification_name(r.classification)},
                   {"implications_hold", r.implications_hold}});
  }
  j["rows"] = arr;
  return j;
}

inline std::string equivalence_to_csv(const std::vector<EquivalenceRow>& rows) {
  CsvTable csv({"operator_id", "stolz_type", "ritt_constant", "hinf_estimate", "phi1_norm", "phi1_dual_norm",
                "phi2_norm", "rbound_powers", "rbound_dd", "classification"});
  auto cell = [](const Column& c) {
    if (!c.flag.empty()) return c.flag;
    return c.value ? CsvTable::num(*c.value) : std::string();
  };
  for (const EquivalenceRow& r : rows) {
    csv.add_row({r.operator_id, r.stolz_type.infinite ? "inf" : CsvTable::num(r.stolz_type.value),
                 CsvTable::num(r.ritt_constant), cell(r.hinf), cell(r.phi1), cell(r.phi1_dual), cell(r.phi2),
                 cell(r.rbound_powers), cell(r.rbound_dd), classification_name(r.classification)});
  }
  return csv.str();
}

struct EquivalenceConfig {
  std::vector<ZooSpec> specs;
  EquivalenceParams params;
};

/// { "specs": [...], "p": float, "nu": float, "seed": int, "budgets": {...} }
inline EquivalenceConfig equivalence_config_from_json(const Json& j) {
  try {
    detail::check_keys(j, {"specs", "p", "nu", "seed", "budgets"});
    EquivalenceConfig c;
    require(j.contains("specs") && j.at("specs").is_array(), Errc::bad_parameters, "config needs a specs array");
    for (const Json& s : j.at("specs")) c.specs.push_back(zoo_from_json(s));
    if (j.contains("p")) c.params.p = j.at("p").get<double>();
    c.params.nu = detail::get_or(j, "nu", c.params.nu);
    c.params.seed = detail::get_or<std::uint64_t>(j, "seed", c.params.seed);
    require(c.params.nu > 1.0, Errc::bad_parameters, "nu must exceed 1");
    if (j.contains("budgets")) {
      const Json& b = j.at("budgets");
      detail::check_keys(b, {"hinf", "rbound_family", "rbound_trials", "rbound_vectors", "probes", "mc_samples",
                             "power_horizon", "dd_horizon"});
      EquivalenceParams& p = c.params;
      p.hinf_budget = detail::get_or(b, "hinf", p.hinf_budget);
      p.rbound_family = detail::get_or(b, "rbound_family", p.rbound_family);
      p.rbound_trials = detail::get_or(b, "rbound_trials", p.rbound_trials);
      p.rbound_vectors = detail::get_or(b, "rbound_vectors", p.rbound_vectors);
      p.probes = detail::get_or(b, "probes", p.probes);
      p.mc_samples = detail::get_or(b, "mc_samples", p.mc_samples);
      p.power_horizon = detail::get_or(b, "power_horizon", p.power_horizon);
      p.dd_horizon = detail::get_or(b, "dd_horizon", p.dd_horizon);
    }
    return c;
  } catch (const Json::exception& e) {
    throw Error(Errc::bad_parameters, std::string("malformed experiment config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Basis sweep

struct BasisSweepSummary {
  double omega = 2.0;
  int m = 1;
  double sup_l1_canonical = 0.0;
  double sup_l1_riesz = 0.0;
  std::optional<double> canonical_exponent;  ///< only for the default real-axis fit
  int failed_canonical = 0;  ///< points whose tail bound could not be certified
  int failed_riesz = 0;
  std::vector<SweepPoint> canonical;
  std::vector<SweepPoint> riesz;
};

struct BasisSweepOptions {
  PairingOptions pairing;
  bool fit_exponent = true;
  unsigned threads = 1;
};

inline BasisSweepSummary run_basis_sweep(double omega, int m, const StolzGrid& grid, const BasisSweepOptions& opts = {}) {
  require(omega > 1.0, Errc::bad_parameters, "omega must exceed 1");
  const StolzDomain d(omega);
  BasisSweepSummary s;
  s.omega = omega;
  s.m = m;
  s.canonical = pairing_sweep(d, m, BasisKind::canonical, grid, opts.pairing, opts.threads);
  s.riesz = pairing_sweep(d, m, BasisKind::riesz, grid, opts.pairing, opts.threads);
  s.sup_l1_canonical = sweep_sup_l1(s.canonical);
  s.sup_l1_riesz = sweep_sup_l1(s.riesz);
  for (const SweepPoint& p : s.canonical) s.failed_canonical += p.table ? 0 : 1;
  for (const SweepPoint& p : s.riesz) s.failed_riesz += p.table ? 0 : 1;
  if (opts.fit_exponent) s.canonical_exponent = fit_canonical_exponent(m).exponent;
  return s;
}

inline Json basis_sweep_to_json(const BasisSweepSummary& s) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "basis_sweep";
  j["omega"] = s.omega;
  j["m"] = s.m;
  j["points"] = s.canonical.size();
  j["sup_l1"] = {{"canonical", number_or_null(s.sup_l1_canonical)}, {"riesz", number_or_null(s.sup_l1_riesz)}};
  j["canonical_exponent"] = s.canonical_exponent ? number_or_null(*s.canonical_exponent) : Json(nullptr);
  j["failed_points"] = {{"canonical", s.failed_canonical}, {"riesz", s.failed_riesz}};
  return j;
}

}  // namespace ritt
