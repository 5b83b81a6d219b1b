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

// Scalar holomorphic functions on Stolz domains: evaluation, boundary
// sup-norm estimates and the L^1 admissibility test for f(z) / (1 - z).

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ritt/numkernel.hpp"
#include "ritt/stolz.hpp"

namespace ritt {

/// Polynomial coefficients, constant term first.
using Poly = std::vector<cplx>;

namespace poly {

inline Poly trimmed(Poly p) {
  while (p.size() > 1 && p.back() == cplx(0.0)) p.pop_back();
  if (p.empty()) p.push_back(0.0);
  return p;
}

inline cplx eval(const Poly& p, cplx z) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Poly derivative(const Poly& p) {
  if (p.size() <= 1) return {0.0};
  Poly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return trimmed(out);
}

inline std::size_t degree(const Poly& p) { return trimmed(p).size() - 1; }

/// Roots via companion-matrix eigenvalues.
inline std::vector<cplx> roots(const Poly& p_in) {
  const Poly p = trimmed(p_in);
  const std::size_t d = p.size() - 1;
  if (d == 0) return {};
  Matrix comp = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -p[i] / p[d];
  Eigen::ComplexEigenSolver<Matrix> solver(comp, false);
  const Vector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Horner's scheme in the matrix argument.
inline Matrix eval(const Poly& p, const Matrix& t) {
  const Eigen::Index n = t.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * t;
    acc.diagonal().array() += *it;
  }
  return acc;
}

}  // namespace poly

inline constexpr std::size_t kMaxCertifiedDenominatorDegree = 64;

class HoloFn {
 public:
  enum class Kind { polynomial, rational, monomial_power, cayley, opaque };
  using Evaluator = std::function<cplx(cplx)>;

  static HoloFn polynomial(Poly coeffs) {
    HoloFn f(Kind::polynomial);
    f.num_ = poly::trimmed(std::move(coeffs));
    return f;
  }

  static HoloFn constant(cplx c) { return polynomial({c}); }

  static HoloFn rational(Poly num, Poly den) {
    HoloFn f(Kind::rational);
    f.num_ = poly::trimmed(std::move(num));
    f.den_ = poly::trimmed(std::move(den));
    require(!(f.den_.size() == 1 && f.den_[0] == cplx(0.0)), Errc::bad_parameters, "zero denominator");
    return f;
  }

  static HoloFn monomial(int n) {
    require(n >= 0, Errc::bad_parameters, "monomial power must be non-negative");
    HoloFn f(Kind::monomial_power);
    f.num_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    f.num_.back() = 1.0;
    f.power_ = n;
    return f;
  }

  /// e(z) = (1 - z) / (1 + z).
  static HoloFn cayley() {
    HoloFn f(Kind::cayley);
    f.num_ = {1.0, -1.0};
    f.den_ = {1.0, 1.0};
    return f;
  }

  /// Arbitrary evaluator. Must be thread-safe; carries no pole certificate.
  static HoloFn opaque(Evaluator eval, std::string name = "opaque") {
    require(static_cast<bool>(eval), Errc::bad_parameters, "opaque function needs an evaluator");
    HoloFn f(Kind::opaque);
    f.eval_ = std::make_shared<Evaluator>(std::move(eval));
    f.name_ = std::move(name);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  bool is_algebraic() const noexcept { return kind_ != Kind::opaque; }
  bool is_polynomial() const noexcept { return is_algebraic() && den_.size() == 1 && den_[0] == cplx(1.0); }
  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  cplx operator()(cplx z) const {
    if (kind_ == Kind::opaque) return (*eval_)(z);
    if (kind_ == Kind::cayley) return (1.0 - z) / (1.0 + z);
    if (kind_ == Kind::monomial_power) return std::pow(z, power_);
    const cplx n = poly::eval(num_, z);
    return den_.size() == 1 ? n / den_[0] : n / poly::eval(den_, z);
  }

  /// f'(z) where the kind has a closed form.
  std::optional<cplx> derivative(cplx z) const {
    if (kind_ == Kind::opaque) return std::nullopt;
    const cplx n = poly::eval(num_, z);
    const cplx dn = poly::eval(poly::derivative(num_), z);
    const cplx d = poly::eval(den_, z);
    const cplx dd = poly::eval(poly::derivative(den_), z);
    return (dn * d - n * dd) / (d * d);
  }

  /// f(T) evaluated directly for algebraic kinds: num(T) den(T)^{-1}.
  std::optional<Matrix> apply_direct(const Matrix& t) const {
    if (kind_ == Kind::opaque) return std::nullopt;
    const Matrix n = poly::eval(num_, t);
    if (den_.size() == 1) return Matrix(n / den_[0]);
    Eigen::PartialPivLU<Matrix> lu(poly::eval(den_, t));
    require(lu.rcond() > kSingularRcond, Errc::singular_resolvent, "denominator singular at T");
    return Matrix(lu.solve(n));
  }

  std::string describe() const {
    if (kind_ == Kind::opaque) return name_;
    if (kind_ == Kind::cayley) return "cayley";
    if (kind_ == Kind::monomial_power) return "monomial:" + std::to_string(power_);
    auto list = [](const Poly& p) {
      std::ostringstream ss;
      ss.precision(17);
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) ss << ',';
        ss << p[i].real();
        if (p[i].imag() != 0.0) ss << (p[i].imag() < 0 ? "" : "+") << p[i].imag() << 'i';
      }
      return ss.str();
    };
    if (kind_ == Kind::polynomial) return "poly:" + list(num_);
    return "rational:" + list(num_) + "/" + list(den_);
  }

  /// Pointwise product; exact (rational) when both factors are algebraic.
  friend HoloFn operator*(const HoloFn& a, const HoloFn& b) {
    if (a.is_algebraic() && b.is_algebraic()) {
      const Poly num = poly::multiply(a.num_, b.num_);
      const Poly den = poly::multiply(a.den_, b.den_);
      if (den.size() == 1 && den[0] == cplx(1.0)) return polynomial(num);
      return rational(num, den);
    }
    return opaque([a, b](cplx z) { return a(z) * b(z); }, "(" + a.describe() + ")*(" + b.describe() + ")");
  }

 private:
  explicit HoloFn(Kind kind) : kind_(kind) {}

  Kind kind_;
  Poly num_{0.0};
  Poly den_{1.0};
  int power_ = 0;
  std::shared_ptr<Evaluator> eval_;
  std::string name_;
};

/// Whether z lies in the closure of the type-omega domain (the vertex included).
inline bool in_stolz_closure(cplx z, double omega, double slack = 1e-10) {
  const double m = std::abs(z);
  if (m > 1.0 + slack) return false;
  return std::abs(1.0 - z) <= omega * std::max(0.0, 1.0 - m) + slack;
}

/// Pole certificate: true when the function has no pole on the closure of D.
/// Opaque functions cannot be certified and return false.
inline bool pole_free(const HoloFn& f, const StolzDomain& d) {
  if (!f.is_algebraic()) return false;
  if (poly::degree(f.denominator()) == 0) return true;
  require(poly::degree(f.denominator()) <= kMaxCertifiedDenominatorDegree, Errc::bad_parameters,
          "denominator degree above certification cap");
  for (const cplx r : poly::roots(f.denominator())) {
    if (in_stolz_closure(r, d.omega())) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sup norms

struct SupNormEstimate {
  double value = 0.0;
  int grid_points = 0;
  bool converged = false;  ///< last density doubling changed the value by < 1%
};

namespace detail {

inline double boundary_grid_max(const HoloFn& f, double omega, int points) {
  const double c = std::acos(1.0 / omega);
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = -c + 2.0 * c * i / (points - 1);
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const ContourNode n = stolz_boundary_node(omega, sign, std::max(0.0, c - std::abs(t)));
    const double v = std::abs(f(n.z));
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return best;
}

}  // namespace detail

/// max |f| over a uniform parameter grid of the boundary of D (maximum
/// modulus principle), doubled until two densities agree within 1%. A lower
/// estimate of the true supremum.
inline SupNormEstimate sup_norm_estimate(const HoloFn& f, const StolzDomain& d, int grid_density = 512,
                                         int max_doublings = 8) {
  require(grid_density >= 2, Errc::bad_parameters, "grid density must be at least 2");
  if (f.is_algebraic()) {
    require(pole_free(f, d), Errc::pole_on_domain, "denominator vanishes on the closed domain");
  }
  SupNormEstimate est;
  int points = grid_density;
  double coarse = detail::boundary_grid_max(f, d.omega(), points);
  for (int k = 0; k < max_doublings; ++k) {
    const int finer_points = 2 * points - 1;  // nested grid
    const double fine = detail::boundary_grid_max(f, d.omega(), finer_points);
    points = finer_points;
    const bool close = std::abs(fine - coarse) <= 0.01 * std::max(fine, 1e-300);
    coarse = std::max(coarse, fine);
    if (close) {
      est.converged = true;
      break;
    }
  }
  require(std::isfinite(coarse), Errc::pole_on_domain, "function is unbounded on the boundary grid");
  est.value = coarse;
  est.grid_points = points;
  return est;
}

inline double sup_norm(const HoloFn& f, const StolzDomain& d, int grid_density = 512) {
  return sup_norm_estimate(f, d, grid_density).value;
}

// ---------------------------------------------------------------------------
// Admissibility: f(z) / (1 - z) in L^1 of the contour

struct AdmissibilityCert {
  double theta = 0.0;
  bool integrable = false;
  double l1_value = 0.0;
  std::string diagnostic;          ///< "converged", "divergent" or "uncertain"
  std::vector<double> estimates;   ///< l1 estimates along the refinement sequence
};

inline double contour_l1(const HoloFn& f, const Contour& c) {
  return c.pairwise_panels<double>([&](const ContourNode& n) {
    return n.weight * std::abs(f(n.z)) / std::abs(n.one_minus_z) * std::abs(n.dz);
  });
}

/// Estimates the L^1 norm of f(z)/(1-z) on the contour while the grading is
/// deepened toward the vertex. Converging increments certify integrability;
/// estimates that keep growing (like the logarithmic divergence of f = 1)
/// do not.
inline AdmissibilityCert admissible(const HoloFn& f, const Contour& c, int rounds = 6, int step_levels = 4) {
  AdmissibilityCert cert;
  cert.theta = c.theta();
  for (int j = 0; j <= rounds; ++j) {
    const Contour deeper = j == 0 ? c : c.deepened(j * step_levels);
    cert.estimates.push_back(contour_l1(f, deeper));
  }
  const auto& e = cert.estimates;
  const double last = e.back();
  cert.l1_value = last;
  if (!std::isfinite(last)) {
    cert.diagnostic = "divergent";
    return cert;
  }
  if (last > 2.0 * e.front()) {
    cert.diagnostic = "divergent";
    return cert;
  }
  const double d_last = std::abs(e[e.size() - 1] - e[e.size() - 2]);
  const double d_prev = std::abs(e[e.size() - 2] - e[e.size() - 3]);
  if (d_last <= 1e-14 * last) {
    cert.integrable = true;
    cert.diagnostic = "converged";
    return cert;
  }
  const double ratio = d_prev > 0.0 ? d_last / d_prev : 1.0;
  const double tail = ratio < 1.0 ? d_last * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
  if (ratio < 0.9 && d_last < 0.05 * last && tail < 0.05 * last) {
    cert.integrable = true;
    cert.diagnostic = "converged";
  } else {
    cert.diagnostic = ratio >= 0.9 ? "divergent" : "uncertain";
  }
  return cert;
}

}  // namespace ritt
