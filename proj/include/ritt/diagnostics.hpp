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

// Operator diagnostics: resolvent (Ritt) constant, power and discrete
// derivative bounds, spectral Stolz type, R-bound Monte Carlo and the
// ergodic splitting at the eigenvalue 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ritt/io.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/rng.hpp"

namespace ritt {

// ---------------------------------------------------------------------------
// Ritt constant

struct RittGrid {
  int radius_levels = 20;    ///< |lambda| = 1 + 2^-j, j = 1..J
  int angles = 64;           ///< uniform angles, including pi
  int refine_levels = 20;    ///< extra angles +-pi 2^-j near lambda = 1
};

struct RittSample {
  cplx lambda;
  double norm = 0.0;
};

struct RittConstantReport {
  double value = 0.0;        ///< lower estimate of the supremum
  cplx argmax;
  bool growing = false;      ///< per-radius maxima keep growing toward the circle
  std::vector<double> radius_maxima;
  std::vector<RittSample> samples;
  int skipped = 0;           ///< grid points that hit the spectrum

  std::string to_csv() const {
    CsvTable table({"re_lambda", "im_lambda", "norm"});
    for (const RittSample& s : samples)
      table.add_row({CsvTable::num(s.lambda.real()), CsvTable::num(s.lambda.imag()), CsvTable::num(s.norm)});
    return table.str();
  }
};

inline std::vector<double> ritt_angles(const RittGrid& grid) {
  std::vector<double> angles;
  for (int k = 0; k < grid.angles; ++k) angles.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * k / grid.angles);
  for (int j = 1; j <= grid.refine_levels; ++j) {
    const double a = std::ldexp(std::numbers::pi, -j);
    angles.push_back(a);
    angles.push_back(-a);
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return angles;
}

/// max ||(lambda - 1) R(lambda, T)|| over the grid outside the unit circle.
inline RittConstantReport ritt_constant(const Operator& t, const RittGrid& grid = {}, unsigned threads = 1) {
  require(grid.radius_levels >= 1 && grid.angles >= 2, Errc::bad_parameters, "Ritt grid too small");
  const SchurResolvent schur(t.matrix());
  const std::vector<double> angles = ritt_angles(grid);
  const std::size_t na = angles.size();
  const std::size_t total = na * static_cast<std::size_t>(grid.radius_levels);
  std::vector<RittSample> slots(total);
  std::vector<char> hit(total, 0);
  parallel_for(total, threads, [&](std::size_t idx) {
    const int j = static_cast<int>(idx / na) + 1;
    const double rho = 1.0 + std::ldexp(1.0, -j);
    const cplx lambda = std::polar(rho, angles[idx % na]);
    slots[idx].lambda = lambda;
    try {
      const Matrix r = schur.triangular_resolvent(lambda) * (lambda - 1.0);
      // The 2-norm is unitarily invariant; other exponents need the original basis.
      slots[idx].norm = t.is_hilbert() ? spectral_norm(r) : matrix_norm(schur.to_original(r), t.p()).value;
      if (!std::isfinite(slots[idx].norm)) hit[idx] = 1;
    } catch (const Error& e) {
      if (e.code() != Errc::singular_resolvent) throw;
      hit[idx] = 1;
    }
  });
  RittConstantReport rep;
  rep.radius_maxima.assign(static_cast<std::size_t>(grid.radius_levels), 0.0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (hit[idx]) {
      ++rep.skipped;
      continue;
    }
    rep.samples.push_back(slots[idx]);
    double& rm = rep.radius_maxima[idx / na];
    rm = std::max(rm, slots[idx].norm);
    if (slots[idx].norm > rep.value) {
      rep.value = slots[idx].norm;
      rep.argmax = slots[idx].lambda;
    }
  }
  const std::size_t last = rep.radius_maxima.size() - 1;
  rep.growing = rep.radius_maxima[last] > 1.5 * rep.radius_maxima[last / 2];
  return rep;
}

// ---------------------------------------------------------------------------
// Power and discrete-derivative bounds

inline constexpr double kOverflowNorm = 1e12;

struct PowerBound {
  double value = 0.0;   ///< max_{1 <= n <= N} ||T^n||
  int horizon = 0;
  int argmax = 0;
  bool overflow = false;
  bool growing = false;
  std::vector<double> norms;  ///< ||T^n||, n = 1..N
};

/// Running products T^n = T^{n-1} T, re-anchored at n = 2^j by repeated
/// squaring so rounding drift does not accumulate over long horizons.
inline PowerBound power_bound(const Operator& t, int horizon) {
  require(horizon >= 1, Errc::bad_parameters, "power horizon must be >= 1");
  PowerBound pb;
  pb.horizon = horizon;
  Matrix power = t.matrix();
  Matrix square = t.matrix();  // T^{2^j}
  int next_checkpoint = 2;
  for (int n = 1; n <= horizon; ++n) {
    if (n > 1) {
      if (n == next_checkpoint) {
        square = square * square;
        power = square;
        next_checkpoint *= 2;
      } else {
        power = power * t.matrix();
      }
    }
    const double v = t.is_hilbert() ? spectral_norm(power) : matrix_norm(power, t.p()).value;
    pb.norms.push_back(v);
    if (v > pb.value) {
      pb.value = v;
      pb.argmax = n;
    }
    if (!(v <= kOverflowNorm)) {
      pb.overflow = true;
      pb.horizon = n;
      break;
    }
  }
  const std::size_t half = pb.norms.size() / 2;
  if (half >= 1) {
    const double first = *std::max_element(pb.norms.begin(), pb.norms.begin() + static_cast<std::ptrdiff_t>(half));
    const double second = *std::max_element(pb.norms.begin() + static_cast<std::ptrdiff_t>(half), pb.norms.end());
    pb.growing = second > 1.05 * first;
  }
  pb.growing = pb.growing || pb.overflow;
  return pb;
}

struct DdBound {
  double value = 0.0;  ///< max_{1 <= k <= K} k ||T^{k-1}(I - T)||
  int horizon = 0;
  int argmax = 0;
  double trend = 0.0;  ///< log-log slope over k in [K/10, K]
  std::vector<double> terms;
};

inline double loglog_slope(const std::vector<double>& terms, int k_lo, int k_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int m = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(std::max(terms[static_cast<std::size_t>(k - 1)], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  return den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
}

inline DdBound dd_bound(const Operator& t, int horizon = 200) {
  require(horizon >= 1, Errc::bad_parameters, "dd horizon must be >= 1");
  DdBound dd;
  dd.horizon = horizon;
  const Eigen::Index n = t.dim();
  Matrix term = identity(n) - t.matrix();  // T^{k-1}(I - T)
  for (int k = 1; k <= horizon; ++k) {
    if (k > 1) term = t.matrix() * term;
    const double nrm = t.is_hilbert() ? spectral_norm(term) : matrix_norm(term, t.p()).value;
    const double v = k * nrm;
    dd.terms.push_back(v);
    if (v > dd.value) {
      dd.value = v;
      dd.argmax = k;
    }
  }
  const int lo = std::max(1, horizon / 10);
  dd.trend = horizon >= 2 ? loglog_slope(dd.terms, lo, horizon) : 0.0;
  return dd;
}

// ---------------------------------------------------------------------------
// Spectral Stolz type

struct StolzType {
  double value = 0.0;
  bool infinite = false;  ///< an eigenvalue away from 1 has modulus >= 1
};

inline constexpr double kDefaultVertexTol = 1e-9;
// Eigenvalues this close to the unit circle count as unimodular; the solver
// cannot resolve 1 - |lambda| below it.
inline constexpr double kUnitCircleTol = 1e-12;

inline StolzType stolz_type_of_eigenvalues(const std::vector<cplx>& ev, double vertex_tol = kDefaultVertexTol) {
  StolzType st;
  for (const cplx l : ev) {
    const double d = std::abs(1.0 - l);
    if (d < vertex_tol) continue;
    const double m = std::abs(l);
    if (m >= 1.0 - kUnitCircleTol) {
      st.infinite = true;
      st.value = std::numeric_limits<double>::infinity();
      continue;
    }
    st.value = std::max(st.value, d / (1.0 - m));
  }
  return st;
}

inline StolzType stolz_type_of_spectrum(const Operator& t, double vertex_tol = kDefaultVertexTol,
                                        std::size_t cap = kDefaultDimensionCap) {
  return stolz_type_of_eigenvalues(eigenvalues(t, cap).eigenvalues, vertex_tol);
}

// ---------------------------------------------------------------------------
// R-bounds

enum class SignKind { rademacher, gaussian };

inline std::string sign_kind_name(SignKind k) { return k == SignKind::rademacher ? "rademacher" : "gaussian"; }

struct RBoundEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
  SignKind sign_kind = SignKind::rademacher;
  std::size_t family_size = 0;
  double uniform_bound = 0.0;  ///< max ||T_k||, the single-term lower bound
  double mc_value = 0.0;       ///< best Monte-Carlo ratio
};

struct RBoundOptions {
  int trials = 64;
  int vectors_per_trial = 256;  ///< sign draws per trial, split into 16 batches
  SignKind sign_kind = SignKind::rademacher;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

inline constexpr int kBatches = 16;

namespace detail {

struct TrialRatio {
  double ratio = 0.0;
  double stderr_ = 0.0;
};

inline TrialRatio rbound_trial(const std::vector<Vector>& images, const std::vector<Vector>& xs, double p,
                               SignKind kind, int draws, CounterRng& rng) {
  const Eigen::Index n = xs.front().size();
  const int per_batch = std::max(1, draws / kBatches);
  std::vector<double> top(kBatches, 0.0), bottom(kBatches, 0.0);
  for (int b = 0; b < kBatches; ++b) {
    for (int s = 0; s < per_batch; ++s) {
      Vector lhs = Vector::Zero(n), rhs = Vector::Zero(n);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double e = kind == SignKind::rademacher ? rng.rademacher() : rng.normal();
        lhs += e * images[k];
        rhs += e * xs[k];
      }
      top[b] += lp_norm(lhs, p);
      bottom[b] += lp_norm(rhs, p);
    }
  }
  TrialRatio out;
  double t_all = 0.0, b_all = 0.0;
  std::vector<double> ratios(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    t_all += top[b];
    b_all += bottom[b];
    ratios[b] = bottom[b] > 0.0 ? top[b] / bottom[b] : 0.0;
  }
  out.ratio = b_all > 0.0 ? t_all / b_all : 0.0;
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= kBatches;
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= (kBatches - 1);
  out.stderr_ = std::sqrt(var / kBatches);
  return out;
}

}  // namespace detail

/// Lower estimate of the R-bound (or gamma-bound with Gaussian signs) of a
/// finite family. Each trial draws test vectors x_k (random directions on the
/// l^p sphere with random magnitudes) and compares E||sum e_k T_k x_k|| with
/// E||sum e_k x_k|| under common sign draws. The single-term configurations
/// give the floor max ||T_k||.
inline RBoundEstimate rbound_estimate(const std::vector<Operator>& family, const RBoundOptions& opts = {}) {
  require(!family.empty(), Errc::empty_family, "R-bound of an empty family");
  require(opts.trials >= 1 && opts.vectors_per_trial >= kBatches, Errc::bad_parameters,
          "need at least one trial and 16 sign draws per trial");
  const Eigen::Index n = family.front().dim();
  const double p = family.front().p();
  for (const Operator& op : family) {
    require(op.dim() == n && op.p() == p, Errc::bad_parameters, "family members must share dim and p");
  }
  RBoundEstimate est;
  est.sign_kind = opts.sign_kind;
  est.family_size = family.size();
  for (const Operator& op : family) est.uniform_bound = std::max(est.uniform_bound, operator_norm(op));

  std::vector<detail::TrialRatio> results(static_cast<std::size_t>(opts.trials));
  parallel_for(results.size(), opts.threads, [&](std::size_t trial) {
    CounterRng rng(opts.seed, trial);
    std::vector<Vector> xs;
    std::vector<Vector> images;
    for (const Operator& op : family) {
      const double scale = rng.uniform();
      Vector x = random_unit_vector(n, p, rng) * scale;
      images.push_back(Vector(op.matrix() * x));
      xs.push_back(std::move(x));
    }
    results[trial] = detail::rbound_trial(images, xs, p, opts.sign_kind, opts.vectors_per_trial, rng);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].ratio > results[best].ratio) best = i;
  est.mc_value = results[best].ratio;
  est.stderr_ = results[best].stderr_;
  est.value = std::max(est.mc_value, est.uniform_bound);
  est.samples = static_cast<long long>(opts.trials) * (opts.vectors_per_trial / kBatches) * kBatches;
  return est;
}

/// {T^n : 1 <= n <= N}
inline std::vector<Operator> power_family(const Operator& t, int count) {
  std::vector<Operator> fam;
  Matrix power = t.matrix();
  for (int k = 1; k <= count; ++k) {
    if (k > 1) power = power * t.matrix();
    fam.push_back(t.with_matrix(power));
  }
  return fam;
}

/// {k T^{k-1}(I - T) : 1 <= k <= N}
inline std::vector<Operator> dd_family(const Operator& t, int count) {
  std::vector<Operator> fam;
  Matrix term = identity(t.dim()) - t.matrix();
  for (int k = 1; k <= count; ++k) {
    if (k > 1) term = t.matrix() * term;
    fam.push_back(t.with_matrix(static_cast<double>(k) * term));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Ergodic splitting X = ker(I - T) + Im(I - T)

struct ErgodicSplit {
  Operator p_ker;
  Operator p_ran;
  int kernel_dim = 0;
  double injectivity_gap = 0.0;  ///< smallest singular value of (I - T) on the range of P_ran
};

/// Spectral projections at the eigenvalue 1, from the Riesz projector on a
/// circle around 1 that separates it from the rest of the spectrum.
inline ErgodicSplit ergodic_split(const Operator& t, double tol = 1e-8) {
  const Eigen::Index n = t.dim();
  const std::vector<cplx> ev = eigenvalues(t).eigenvalues;
  int at_one = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx l : ev) {
    const double d = std::abs(l - 1.0);
    if (d <= tol) {
      ++at_one;
    } else {
      gap = std::min(gap, d);
    }
  }
  Matrix pk = Matrix::Zero(n, n);
  if (at_one > 0) {
    const double radius = std::isfinite(gap) ? 0.5 * gap : 0.5;
    const SchurResolvent schur(t.matrix());
    auto trapezoid = [&](int m) {
      Matrix acc = Matrix::Zero(n, n);
      for (int k = 0; k < m; ++k) {
        const cplx w = std::polar(radius, 2.0 * std::numbers::pi * k / m);
        acc += w * schur.triangular_resolvent(1.0 + w);
      }
      return Matrix(acc / static_cast<double>(m));
    };
    int m = 64;
    Matrix prev = trapezoid(m);
    for (int round = 0; round < 12; ++round) {
      m *= 2;
      Matrix next = trapezoid(m);
      const double change = (next - prev).norm();
      prev = std::move(next);
      if (change <= 1e-13 * std::max(1.0, prev.norm())) break;
    }
    pk = schur.to_original(prev);
    const double defect = spectral_norm((t.matrix() - identity(n)) * pk);
    require(defect <= 10.0 * tol * std::max(1.0, spectral_norm(pk)), Errc::non_semisimple,
            "eigenvalue 1 is not semisimple");
  }
  ErgodicSplit out{t.with_matrix(pk), t.with_matrix(identity(n) - pk), at_one, 0.0};
  if (at_one < n) {
    Eigen::JacobiSVD<Matrix> svd(out.p_ran.matrix(), Eigen::ComputeThinU);
    const Matrix basis = svd.matrixU().leftCols(n - at_one);
    out.injectivity_gap = smallest_singular_value((identity(n) - t.matrix()) * basis);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

enum class Classification { ritt_likely, power_bounded_not_ritt, not_power_bounded, inconclusive };

inline std::string classification_name(Classification c) {
  switch (c) {
    case Classification::ritt_likely: return "RittLikely";
    case Classification::power_bounded_not_ritt: return "PowerBoundedNotRitt";
    case Classification::not_power_bounded: return "NotPowerBounded";
    case Classification::inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

inline constexpr double kTrendTolerance = 0.1;

inline Classification classify(const PowerBound& pb, const DdBound& dd) {
  if (pb.overflow || pb.growing) return Classification::not_power_bounded;
  if (dd.trend <= kTrendTolerance) return Classification::ritt_likely;
  if (std::abs(dd.trend - 1.0) <= kTrendTolerance) return Classification::power_bounded_not_ritt;
  return Classification::inconclusive;
}

struct DiagnosticsOptions {
  RittGrid grid;
  int power_horizon = 200;
  int dd_horizon = 200;
  double vertex_tol = kDefaultVertexTol;
  bool with_rbound = false;
  int rbound_family = 32;
  RBoundOptions rbound;
  unsigned threads = 1;
};

struct DiagnosticsReport {
  RittConstantReport ritt;
  PowerBound power;
  DdBound dd;
  StolzType stolz_type;
  std::optional<RBoundEstimate> rbound;
  Classification classification = Classification::inconclusive;
};

inline DiagnosticsReport diagnose(const Operator& t, const DiagnosticsOptions& opts = {}) {
  DiagnosticsReport rep;
  rep.ritt = ritt_constant(t, opts.grid, opts.threads);
  rep.power = power_bound(t, opts.power_horizon);
  rep.dd = dd_bound(t, opts.dd_horizon);
  rep.stolz_type = stolz_type_of_spectrum(t, opts.vertex_tol);
  if (opts.with_rbound) {
    RBoundOptions ro = opts.rbound;
    ro.threads = opts.threads;
    rep.rbound = rbound_estimate(power_family(t, opts.rbound_family), ro);
  }
  rep.classification = classify(rep.power, rep.dd);
  return rep;
}

inline Json rbound_to_json(const RBoundEstimate& r) {
  Json j;
  j["value"] = number_or_null(r.value);
  j["stderr"] = number_or_null(r.stderr_);
  j["samples"] = r.samples;
  j["sign_kind"] = sign_kind_name(r.sign_kind);
  j["family_size"] = r.family_size;
  j["uniform_bound"] = number_or_null(r.uniform_bound);
  j["mc_value"] = number_or_null(r.mc_value);
  return j;
}

inline Json diagnostics_to_json(const DiagnosticsReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "diagnostics";
  j["ritt_constant"] = {{"value", number_or_null(r.ritt.value)},
                        {"argmax", complex_to_json(r.ritt.argmax)},
                        {"growing", r.ritt.growing},
                        {"skipped", r.ritt.skipped},
                        {"lower_estimate", true}};
  j["power_bound"] = {{"value", number_or_null(r.power.value)},
                      {"horizon", r.power.horizon},
                      {"argmax", r.power.argmax},
                      {"overflow", r.power.overflow},
                      {"growing", r.power.growing}};
  j["dd_bound"] = {{"value", number_or_null(r.dd.value)},
                   {"horizon", r.dd.horizon},
                   {"argmax", r.dd.argmax},
                   {"trend", number_or_null(r.dd.trend)}};
  j["stolz_type_spec"] = {{"value", number_or_null(r.stolz_type.value)}, {"infinite", r.stolz_type.infinite}};
  j["rbound"] = r.rbound ? rbound_to_json(*r.rbound) : Json(nullptr);
  j["classification"] = classification_name(r.classification);
  return j;
}

}  // namespace ritt
