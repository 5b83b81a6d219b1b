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

// f(T) by the Cauchy integral over the boundary of a Stolz domain, by the
// Cayley-regularized extension, and by eigendecomposition; plus lower
// estimates of the H-infinity calculus constant.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ritt/basis.hpp"
#include "ritt/diagnostics.hpp"
#include "ritt/holo.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/stolz.hpp"

namespace ritt {

enum class CalcMethod { contour, regularized, eigen_oracle };

inline std::string calc_method_name(CalcMethod m) {
  switch (m) {
    case CalcMethod::contour: return "contour";
    case CalcMethod::regularized: return "regularized";
    case CalcMethod::eigen_oracle: return "eigen_oracle";
  }
  return "contour";
}

struct CalcResult {
  Operator value;
  CalcMethod method = CalcMethod::contour;
  double quad_error_est = 0.0;  ///< change under the last refinement doubling
  double contour_theta = 0.0;
  std::size_t nodes = 0;
};

struct CalcOptions {
  ContourResolution start{.levels = 12, .subdivisions = 1, .order = 16};
  int max_doublings = 8;
  unsigned threads = 1;
  bool check_admissible = true;
};

namespace detail {

/// (1 / 2 pi i) sum_j w_j f(z_j) (z_j - U)^{-1} z'_j in the Schur basis for
/// every f, one resolvent per node; summed per panel, pairwise across panels.
inline std::vector<Matrix> cauchy_sums(const SchurResolvent& schur, const std::vector<HoloFn>& fs, const Contour& c,
                                       unsigned threads) {
  const auto& panels = c.panels();
  const auto& nodes = c.nodes();
  const Eigen::Index n = schur.dim();
  std::vector<std::vector<Matrix>> sums(panels.size());
  parallel_for(panels.size(), threads, [&](std::size_t p) {
    std::vector<Matrix> acc(fs.size(), Matrix::Zero(n, n));
    for (std::size_t k = 0; k < panels[p].node_count; ++k) {
      const ContourNode& node = nodes[panels[p].first_node + k];
      const Matrix r = schur.triangular_resolvent(node.z);
      for (std::size_t i = 0; i < fs.size(); ++i) acc[i] += (node.weight * node.dz * fs[i](node.z)) * r;
    }
    sums[p] = std::move(acc);
  });
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const Matrix total = pairwise_sum<Matrix>(0, sums.size(), [&](std::size_t q) { return sums[q][i]; });
    out.push_back(total / cplx(0.0, 2.0 * std::numbers::pi));
  }
  return out;
}

inline void require_spectrum_inside(const Operator& t, double theta) {
  const Spectrum spec = eigenvalues(t);
  for (const cplx l : spec.eigenvalues) {
    require(std::abs(1.0 - l) >= kDefaultVertexTol, Errc::spectrum_outside_contour,
            "eigenvalue at the vertex 1; split it off with ergodic_split first");
  }
  const StolzType st = stolz_type_of_eigenvalues(spec.eigenvalues);
  require(!st.infinite && st.value < theta, Errc::spectrum_outside_contour,
          "spectral Stolz type " + std::to_string(st.value) + " is not below theta " + std::to_string(theta));
}

}  // namespace detail

/// f(T) = (1 / 2 pi i) \oint f(z) R(z, T) dz over the boundary of Stolz_theta
/// for several f at once; panels are refined until every value changes by at
/// most tol in operator norm.
inline std::vector<CalcResult> calc_contour_batch(const Operator& t, const std::vector<HoloFn>& fs, double theta,
                                                  double tol, const CalcOptions& opts = {}) {
  require(tol > 0.0, Errc::bad_parameters, "tolerance must be positive");
  detail::require_spectrum_inside(t, theta);
  Contour c = Contour::build(theta, opts.start);
  const StolzDomain domain(theta);
  for (const HoloFn& f : fs) {
    if (f.is_algebraic()) {
      require(pole_free(f, domain), Errc::pole_on_domain, "f has a pole inside the contour: " + f.describe());
    }
    if (opts.check_admissible) {
      const AdmissibilityCert cert = admissible(f, c);
      require(cert.integrable, Errc::not_admissible,
              "f(z)/(1-z) is not integrable on the contour (" + cert.diagnostic + "): " + f.describe());
    }
  }
  const SchurResolvent schur(t.matrix());
  std::vector<Matrix> current = detail::cauchy_sums(schur, fs, c, opts.threads);
  for (int d = 0; d < opts.max_doublings; ++d) {
    const Contour finer = c.refined();
    std::vector<Matrix> next = detail::cauchy_sums(schur, fs, finer, opts.threads);
    std::vector<double> change(fs.size());
    bool done = true;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      change[i] = spectral_norm(next[i] - current[i]);
      done = done && change[i] <= tol;
    }
    c = finer;
    current = std::move(next);
    if (done) {
      std::vector<CalcResult> out;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        out.push_back(CalcResult{t.with_matrix(schur.to_original(current[i])), CalcMethod::contour, change[i], theta,
                                 c.nodes().size()});
      }
      return out;
    }
  }
  throw Error(Errc::non_convergence, "contour quadrature did not reach the tolerance");
}

inline CalcResult calc_contour(const Operator& t, const HoloFn& f, double theta, double tol,
                               const CalcOptions& opts = {}) {
  return calc_contour_batch(t, {f}, theta, tol, opts).front();
}

inline constexpr double kRegularizableSigma = 1e-10;

/// f(T) = e(T)^{-1} (e f)(T) with e(z) = (1 - z) / (1 + z).
inline CalcResult calc_regularized(const Operator& t, const HoloFn& f, double theta, double tol,
                                   const CalcOptions& opts = {}) {
  const Eigen::Index n = t.dim();
  const Matrix i_minus = identity(n) - t.matrix();
  const Matrix i_plus = identity(n) + t.matrix();
  require(smallest_singular_value(i_minus) > kRegularizableSigma, Errc::not_regularizable,
          "I - T is numerically singular");
  require(smallest_singular_value(i_plus) > kRegularizableSigma, Errc::not_regularizable,
          "I + T is numerically singular");
  const CalcResult ef = calc_contour(t, HoloFn::cayley() * f, theta, tol, opts);
  Eigen::PartialPivLU<Matrix> lu(i_minus);
  const Matrix value = i_plus * lu.solve(ef.value.matrix());
  const double amplification = spectral_norm(i_plus) / smallest_singular_value(i_minus);
  return CalcResult{t.with_matrix(value), CalcMethod::regularized, ef.quad_error_est * amplification, theta, ef.nodes};
}

inline constexpr double kOracleConditionCap = 1e6;

/// V diag(f(lambda_j)) V^{-1}.
inline CalcResult calc_eigen_oracle(const Operator& t, const HoloFn& f) {
  Eigen::ComplexEigenSolver<Matrix> solver(t.matrix(), true);
  require(solver.info() == Eigen::Success, Errc::non_convergence, "eigendecomposition failed");
  const Matrix& v = solver.eigenvectors();
  Eigen::JacobiSVD<Matrix> svd(v);
  const auto& sv = svd.singularValues();
  require(sv(sv.size() - 1) > 0.0 && sv(0) / sv(sv.size() - 1) <= kOracleConditionCap, Errc::ill_conditioned,
          "eigenvector matrix too ill-conditioned for the oracle");
  Vector fl(solver.eigenvalues().size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(solver.eigenvalues()(i));
  const Matrix value = v * fl.asDiagonal() * v.partialPivLu().solve(identity(t.dim()));
  return CalcResult{t.with_matrix(value), CalcMethod::eigen_oracle, 0.0, 0.0, 0};
}

/// Contour type between the spectral type and nu: their geometric mean.
inline double default_theta(const Operator& t, double nu) {
  const StolzType st = stolz_type_of_spectrum(t);
  require(!st.infinite && st.value < nu, Errc::spectrum_outside_contour, "spectral Stolz type is not below nu");
  return std::sqrt(std::max(st.value, 1.0) * nu);
}

// ---------------------------------------------------------------------------
// H-infinity constant

struct HinfFamilies {
  bool monomials = true;        ///< z^n, n = 0..budget
  bool dd_functions = true;     ///< k (1 - z) z^{k-1}, k = 1..budget
  bool random_polys = true;     ///< budget / 4 polynomials of degree <= 32
  bool pairing_functions = true;  ///< <F(z), b_n>, n = 1..7, from the table
};

struct HinfEstimate {
  double value = 0.0;        ///< max ||f(T)|| / sup |f| over the sampled family
  std::string argmax;
  int evaluated = 0;
  std::vector<std::pair<std::string, double>> family_maxima;
};

/// Lower estimate of the H-infinity(Stolz_nu) calculus constant. Every test
/// function is a polynomial, so f(T) is evaluated in T directly.
inline HinfEstimate hinf_constant_estimate(const Operator& t, double nu, int budget, const HinfFamilies& fam = {},
                                           std::uint64_t seed = 1, unsigned threads = 1) {
  require(budget >= 1, Errc::bad_parameters, "budget must be >= 1");
  const StolzType st = stolz_type_of_spectrum(t);
  require(!st.infinite && st.value < nu, Errc::spectrum_outside_contour, "spectral Stolz type is not below nu");
  const StolzDomain domain(nu);

  struct Candidate {
    std::string family;
    std::string name;
    HoloFn f;
  };
  std::vector<Candidate> cands;
  if (fam.monomials)
    for (int n = 0; n <= budget; ++n) cands.push_back({"monomials", "z^" + std::to_string(n), HoloFn::monomial(n)});
  if (fam.dd_functions) {
    for (int k = 1; k <= budget; ++k) {
      Poly c(static_cast<std::size_t>(k) + 1, 0.0);
      c[static_cast<std::size_t>(k - 1)] = static_cast<double>(k);
      c[static_cast<std::size_t>(k)] = -static_cast<double>(k);
      cands.push_back({"dd_functions", "k(1-z)z^(k-1),k=" + std::to_string(k), HoloFn::polynomial(c)});
    }
  }
  if (fam.random_polys) {
    const int count = std::max(1, budget / 4);
    for (int i = 0; i < count; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      const int degree = 1 + static_cast<int>(rng.next_u32() % 32U);
      Poly c(static_cast<std::size_t>(degree) + 1);
      for (cplx& x : c) x = rng.complex_normal();
      cands.push_back({"random_polys", "random#" + std::to_string(i), HoloFn::polynomial(c)});
    }
  }
  if (fam.pairing_functions) {
    for (int n = 1; n <= 7; ++n) {
      // <F(z), b_n> = sqrt(n) (1 - z) z^{n-1} sum_j w^j z^j as a polynomial.
      const auto [w, d] = pairing_table_root(n);
      Poly geo(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) geo[static_cast<std::size_t>(j)] = std::pow(w, j);
      Poly shift(static_cast<std::size_t>(n), 0.0);
      shift.back() = std::sqrt(static_cast<double>(n));
      const Poly c = poly::multiply(poly::multiply(shift, geo), Poly{1.0, -1.0});
      cands.push_back({"pairing_functions", "F-pairing,n=" + std::to_string(n), HoloFn::polynomial(c)});
    }
  }

  std::vector<double> ratios(cands.size(), 0.0);
  parallel_for(cands.size(), threads, [&](std::size_t i) {
    const double sup = sup_norm(cands[i].f, domain);
    if (!(sup > 0.0)) return;
    const Matrix ft = *cands[i].f.apply_direct(t.matrix());
    const double nrm = t.is_hilbert() ? spectral_norm(ft) : matrix_norm(ft, t.p()).value;
    ratios[i] = nrm / sup;
  });
  HinfEstimate est;
  est.evaluated = static_cast<int>(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (ratios[i] > est.value) {
      est.value = ratios[i];
      est.argmax = cands[i].name;
    }
    auto it = std::find_if(est.family_maxima.begin(), est.family_maxima.end(),
                           [&](const auto& e) { return e.first == cands[i].family; });
    if (it == est.family_maxima.end()) {
      est.family_maxima.emplace_back(cands[i].family, ratios[i]);
    } else {
      it->second = std::max(it->second, ratios[i]);
    }
  }
  return est;
}

}  // namespace ritt
