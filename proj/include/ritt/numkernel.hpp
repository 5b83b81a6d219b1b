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

// Dense complex linear algebra on finite-dimensional l^p spaces: the Operator
// value type, resolvent solves, l^p operator norms and eigenvalues.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "ritt/error.hpp"
#include "ritt/rng.hpp"

namespace ritt {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimensionCap = 256;

/// A square complex matrix acting on l^p_n, 1 < p < infinity.
class Operator {
 public:
  Operator(Matrix entries, double p = 2.0) : entries_(std::move(entries)), p_(p) {
    require(entries_.rows() == entries_.cols() && entries_.rows() > 0, Errc::bad_parameters,
            "operator must be a non-empty square matrix");
    require(entries_.allFinite(), Errc::bad_parameters, "operator entries must be finite");
    require(std::isfinite(p_) && p_ > 1.0, Errc::bad_parameters, "space exponent p must lie in (1, inf)");
  }

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  double p() const noexcept { return p_; }
  double dual_p() const noexcept { return p_ / (p_ - 1.0); }
  bool is_hilbert() const noexcept { return p_ == 2.0; }

  /// Conjugate transpose acting on the dual space l^q_n.
  Operator adjoint() const { return Operator(entries_.adjoint(), dual_p()); }

  /// Same exponent, different matrix.
  Operator with_matrix(Matrix m) const { return Operator(std::move(m), p_); }

  friend bool operator==(const Operator& a, const Operator& b) {
    return a.p_ == b.p_ && a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
  double p_;
};

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

// ---------------------------------------------------------------------------
// l^p vector norms

inline double lp_norm(const Vector& v, double p) {
  if (p == 2.0) return v.norm();
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, p);
  return scale * std::pow(acc, 1.0 / p);
}

/// The norming functional of v in l^p, as a unit vector of l^q:
/// <dual, v> = ||v||_p with the sesquilinear pairing dual^H v.
inline Vector lp_dual_vector(const Vector& v, double p) {
  const double nrm = lp_norm(v, p);
  Vector out = Vector::Zero(v.size());
  if (nrm == 0.0) return out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a == 0.0) continue;
    out[i] = (v[i] / a) * std::pow(a / nrm, p - 1.0);
  }
  return out;
}

inline Vector random_unit_vector(Eigen::Index n, double p, CounterRng& rng) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v / lp_norm(v, p);
}

// ---------------------------------------------------------------------------
// Operator norms

struct NormEstimate {
  double value = 0.0;
  bool estimate = false;  ///< true when only a lower estimate is available
  Vector maximizer;       ///< unit vector attaining `value`
};

struct NormOptions {
  int max_iterations = 500;
  double tolerance = 1e-8;  ///< relative change between successive gains
};

inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace detail {

// Higham's dual power iteration for ||A||_p (a lower estimate). Returns the
// best ratio found from `start`, and whether the stopping test fired.
inline std::pair<NormEstimate, bool> pnorm_power(const Matrix& a, double p, Vector start,
                                                 const NormOptions& opts) {
  const double q = p / (p - 1.0);
  NormEstimate best;
  best.estimate = true;
  Vector x = start / lp_norm(start, p);
  double previous = -1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Vector y = a * x;
    const double gain = lp_norm(y, p);
    if (gain > best.value) {
      best.value = gain;
      best.maximizer = x;
    }
    if (gain == 0.0) return {best, true};
    const Vector z = a.adjoint() * lp_dual_vector(y, p);
    const double zq = lp_norm(z, q);
    const double zx = z.dot(x).real();
    if (zq <= zx * (1.0 + 1e-14)) return {best, true};
    if (previous >= 0.0 && std::abs(gain - previous) <= opts.tolerance * gain) return {best, true};
    previous = gain;
    x = lp_dual_vector(z, q);
  }
  return {best, false};
}

}  // namespace detail

/// ||A||_{p->p}. Exact for p = 2 (largest singular value); otherwise a lower
/// estimate by dual power iteration from several starts.
inline NormEstimate matrix_norm(const Matrix& a, double p, const NormOptions& opts = {}) {
  NormEstimate out;
  const Eigen::Index n = a.cols();
  if (p == 2.0) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    out.value = svd.singularValues()(0);
    out.maximizer = svd.matrixV().col(0);
    return out;
  }
  out.estimate = true;
  // Column with the largest l^p norm, the flat vector and two fixed random
  // directions. The column start makes diagonal and permutation-structured
  // matrices exact.
  Eigen::Index best_col = 0;
  double best_col_norm = -1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double c = lp_norm(a.col(j), p);
    if (c > best_col_norm) {
      best_col_norm = c;
      best_col = j;
    }
  }
  std::vector<Vector> starts;
  starts.push_back(Vector::Unit(n, best_col));
  starts.push_back(Vector::Ones(n));
  CounterRng rng(0x5eedULL, static_cast<std::uint64_t>(n));
  starts.push_back(random_unit_vector(n, p, rng));
  starts.push_back(random_unit_vector(n, p, rng));
  bool any_converged = false;
  for (const Vector& s : starts) {
    auto [est, converged] = detail::pnorm_power(a, p, s, opts);
    any_converged = any_converged || converged;
    if (est.value > out.value || out.maximizer.size() == 0) {
      out.value = est.value;
      out.maximizer = est.maximizer;
    }
  }
  require(any_converged, Errc::non_convergence, "l^p norm iteration did not stabilize");
  return out;
}

/// A guaranteed upper bound of ||A||_{p->p}: exact for p = 2, Riesz-Thorin
/// interpolation between the 1- and inf-norms otherwise.
inline double matrix_norm_upper(const Matrix& a, double p) {
  if (p == 2.0) return spectral_norm(a);
  const double n1 = a.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = a.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(n1, 1.0 / p) * std::pow(ninf, 1.0 - 1.0 / p);
}

inline NormEstimate operator_norm_estimate(const Operator& t, const NormOptions& opts = {}) {
  return matrix_norm(t.matrix(), t.p(), opts);
}

inline double operator_norm(const Operator& t) { return operator_norm_estimate(t).value; }

// ---------------------------------------------------------------------------
// Resolvents

/// Reciprocal condition below which lambda I - T is treated as singular.
inline constexpr double kSingularRcond = 1e-14;

/// Solves (lambda I - T) w = v.
inline Vector resolvent_apply(const Operator& t, cplx lambda, const Vector& v) {
  require(v.size() == t.dim(), Errc::bad_parameters, "vector dimension mismatch");
  const Matrix shifted = lambda * identity(t.dim()) - t.matrix();
  Eigen::PartialPivLU<Matrix> lu(shifted);
  if (!(lu.rcond() > kSingularRcond)) {
    throw Error(Errc::singular_resolvent, "lambda is numerically in the spectrum");
  }
  Vector w = lu.solve(v);
  // One step of iterative refinement keeps the residual at working precision.
  const Vector r = v - shifted * w;
  w += lu.solve(r);
  return w;
}

inline Matrix resolvent_matrix(const Operator& t, cplx lambda) {
  const Matrix shifted = lambda * identity(t.dim()) - t.matrix();
  Eigen::PartialPivLU<Matrix> lu(shifted);
  if (!(lu.rcond() > kSingularRcond)) {
    throw Error(Errc::singular_resolvent, "lambda is numerically in the spectrum");
  }
  return lu.inverse();
}

/// Complex Schur form T = Q U Q^H. Resolvents then cost one triangular
/// inversion per point, which is what the contour and grid sweeps need.
class SchurResolvent {
 public:
  explicit SchurResolvent(const Matrix& t) : schur_(t, true) {
    require(schur_.info() == Eigen::Success, Errc::non_convergence, "Schur decomposition failed");
  }

  const Matrix& unitary() const { return schur_.matrixU(); }
  const Matrix& triangular() const { return schur_.matrixT(); }
  Eigen::Index dim() const { return schur_.matrixT().rows(); }

  std::vector<cplx> eigenvalues() const {
    const Matrix& u = triangular();
    std::vector<cplx> ev(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) ev[static_cast<std::size_t>(i)] = u(i, i);
    return ev;
  }

  /// (z I - U)^{-1}, upper triangular.
  Matrix triangular_resolvent(cplx z) const {
    const Matrix& u = triangular();
    const Eigen::Index n = u.rows();
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(u(i, i)));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(z - u(j, j)) <= kSingularRcond * std::max(1.0, scale)) {
        throw Error(Errc::singular_resolvent, "contour point hits the spectrum");
      }
    }
    Matrix shifted = -u;
    shifted.diagonal().array() += z;
    Matrix x = Matrix::Identity(n, n);
    shifted.triangularView<Eigen::Upper>().solveInPlace(x);
    return x;
  }

  Matrix to_original(const Matrix& triangular_basis) const {
    return unitary() * triangular_basis * unitary().adjoint();
  }

  Matrix resolvent(cplx z) const { return to_original(triangular_resolvent(z)); }

 private:
  Eigen::ComplexSchur<Matrix> schur_;
};

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
  std::vector<cplx> eigenvalues;
  double radius = 0.0;
  double eigenvector_condition = 1.0;
  bool ill_conditioned = false;  ///< eigenvector condition above 1e8 (warning only)
  double max_residual = 0.0;     ///< max ||Tv - lambda v|| / ||v||
};

inline constexpr double kIllConditionedThreshold = 1e8;

inline Spectrum eigenvalues(const Operator& t, std::size_t cap = kDefaultDimensionCap) {
  require(static_cast<std::size_t>(t.dim()) <= cap, Errc::dimension_cap,
          "dimension " + std::to_string(t.dim()) + " exceeds cap " + std::to_string(cap));
  Eigen::ComplexEigenSolver<Matrix> solver(t.matrix(), true);
  require(solver.info() == Eigen::Success, Errc::non_convergence, "QR iteration did not converge");
  Spectrum s;
  const Vector& ev = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    s.radius = std::max(s.radius, std::abs(ev[i]));
    const Vector v = vecs.col(i);
    const double vn = v.norm();
    if (vn > 0.0) s.max_residual = std::max(s.max_residual, (t.matrix() * v - ev[i] * v).norm() / vn);
  }
  Eigen::JacobiSVD<Matrix> svd(vecs);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  s.eigenvector_condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  s.ill_conditioned = !(s.eigenvector_condition <= kIllConditionedThreshold);
  return s;
}

/// Smallest singular value, used for injectivity checks.
inline double smallest_singular_value(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

}  // namespace ritt
