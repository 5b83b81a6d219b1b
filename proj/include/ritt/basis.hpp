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

// The vector function F_m(z) = (k^{m-1/2} (1-z)^m z^{k-1})_k, its pairings
// with the canonical basis and with the 5x5 block basis, the polylogarithm
// Li_{-1/2}, and l^1 sweeps over Stolz-domain grids.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ritt/io.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/stolz.hpp"

namespace ritt {

// ---------------------------------------------------------------------------
// Polylogarithm of order -1/2

namespace detail {

// zeta(-1/2 - k), k = 0..4
inline constexpr std::array<double, 5> kZetaNegHalf = {
    -0.20788622497735456673, -0.02548520188983303611, 0.0085169287778503310199,
    0.0044410113354794323454, -0.003091669247215833756};

inline double polylog_half_asymptotic(double x) {
  const double mu = std::log(x);
  const double gamma_3_2 = 0.5 * std::sqrt(std::numbers::pi);
  double sum = gamma_3_2 * std::pow(-mu, -1.5);
  double power = 1.0;
  double fact = 1.0;
  for (std::size_t k = 0; k < kZetaNegHalf.size(); ++k) {
    if (k > 0) {
      power *= mu;
      fact *= static_cast<double>(k);
    }
    sum += kZetaNegHalf[k] * power / fact;
  }
  return sum;
}

}  // namespace detail

inline constexpr double kPolylogSwitch = 0.9999;

/// Li_{-1/2}(x) = sum_{k>=1} sqrt(k) x^k for 0 <= x < 1.
inline double polylog_half(double x) {
  require(x >= 0.0 && x < 1.0, Errc::out_of_range, "polylog_half needs 0 <= x < 1");
  if (x == 0.0) return 0.0;
  if (x > kPolylogSwitch) return detail::polylog_half_asymptotic(x);
  double sum = 0.0;
  double xk = 1.0;
  for (long long k = 1;; ++k) {
    xk *= x;
    const double term = std::sqrt(static_cast<double>(k)) * xk;
    sum += term;
    // Consecutive-term ratio beyond k is at most rho; the tail is geometric.
    const double rho = std::sqrt(static_cast<double>(k + 2) / static_cast<double>(k + 1)) * x;
    const double next = std::sqrt(static_cast<double>(k + 1)) * xk * x;
    if (rho < 1.0 && next / (1.0 - rho) < 1e-12 * sum) return sum;
  }
}

// ---------------------------------------------------------------------------
// F_m

inline std::vector<cplx> F_m_entries(cplx z, int m, long long count) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "F_m needs |z| < 1");
  require(m >= 1 && count >= 0, Errc::bad_parameters, "F_m needs m >= 1");
  std::vector<cplx> out(static_cast<std::size_t>(count));
  const cplx lead = std::pow(1.0 - z, m);
  cplx zk = 1.0;
  for (long long k = 1; k <= count; ++k) {
    out[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), m - 0.5) * lead * zk;
    zk *= z;
  }
  return out;
}

/// Smallest K with scale * sum_{k>K} k^a x^{k-1} <= rel * head, the tail
/// bounded by term_{K+1} / (1 - rho), rho = ((K+2)/(K+1))^a x, and head the
/// partial sum up to K.
inline long long geometric_truncation(double x, double a, double scale, double rel, long long max_terms,
                                      double& tail, double& head) {
  head = 0.0;
  double xk = 1.0;  // x^{k-1}
  for (long long k = 1; k <= max_terms; ++k) {
    head += scale * std::pow(static_cast<double>(k), a) * xk;
    xk *= x;
    const double next = scale * std::pow(static_cast<double>(k + 1), a) * xk;
    const double rho = std::pow(static_cast<double>(k + 2) / static_cast<double>(k + 1), a) * x;
    if (rho < 1.0) {
      tail = next / (1.0 - rho);
      if (tail <= rel * head) return k;
    }
  }
  throw Error(Errc::tail_bound_failure, "truncation budget exhausted");
}

// ---------------------------------------------------------------------------
// Block basis

/// Rows of the block diagonal operator with blocks A_k = A D_k,
/// D_k = diag(sqrt((5k+1)/(5k+j)))_{j=1..5}.
class RieszBasis {
 public:
  static cplx a() { return std::polar(1.0, 2.0 * std::numbers::pi / 3.0); }
  static cplx b() { return cplx(0.0, 1.0); }

  /// The 5x5 matrix A entry by entry.
  static Matrix literal_a() {
    const cplx a1 = a(), b1 = b();
    auto pw = [](cplx w, int k) { return std::pow(w, k); };
    Matrix m(5, 5);
    m << 1.0, a1, pw(a1, 2), 0.0, 0.0,
         1.0, pw(a1, 2), pw(a1, 4), 0.0, 0.0,
         0.0, 1.0, b1, pw(b1, 2), pw(b1, 4),
         0.0, 1.0, pw(b1, 2), pw(b1, 4), pw(b1, 6),
         0.0, 1.0, pw(b1, 3), pw(b1, 6), pw(b1, 9);
    return m;
  }

  static Eigen::VectorXd d_diagonal(long long k) {
    Eigen::VectorXd d(5);
    for (int j = 1; j <= 5; ++j) d(j - 1) = std::sqrt((5.0 * k + 1.0) / (5.0 * k + j));
    return d;
  }

  static Matrix block(long long k) { return literal_a() * d_diagonal(k).cast<cplx>().asDiagonal(); }

  /// cond(A_k) for k < block_count and the bound cond(A) max_k cond(D_k).
  static std::pair<std::vector<double>, double> block_conditions(int block_count) {
    auto cond = [](const Matrix& m) {
      Eigen::JacobiSVD<Matrix> svd(m);
      const auto& s = svd.singularValues();
      return s(0) / s(s.size() - 1);
    };
    std::vector<double> out;
    double dmax = 1.0;
    for (int k = 0; k < block_count; ++k) {
      out.push_back(cond(block(k)));
      const Eigen::VectorXd d = d_diagonal(k);
      dmax = std::max(dmax, d.maxCoeff() / d.minCoeff());
    }
    return {out, cond(literal_a()) * dmax};
  }

  /// Condition number of the Gram matrix of b_1..b_{5B}.
  static double gram_condition(int blocks) {
    double smax = 0.0, smin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < blocks; ++k) {
      Eigen::JacobiSVD<Matrix> svd(block(k));
      const auto& s = svd.singularValues();
      smax = std::max(smax, s(0));
      smin = std::min(smin, s(s.size() - 1));
    }
    return (smax * smax) / (smin * smin);
  }

  /// b_n lives in block (n-1)/5, row (n-1) mod 5.
  static std::pair<long long, int> locate(long long n) {
    require(n >= 1, Errc::bad_parameters, "basis index starts at 1");
    return {(n - 1) / 5, static_cast<int>((n - 1) % 5)};
  }

  /// Bilinear pairing <f, b_n> = sum_i f_i (b_n)_i (no conjugation);
  /// `f` indexed from 1 at position 0, long enough to cover the block.
  static cplx pairing(const std::vector<cplx>& f, long long n) {
    const auto [k, r] = locate(n);
    static const Matrix a_lit = literal_a();
    const Eigen::VectorXd d = d_diagonal(k);
    cplx acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += f[static_cast<std::size_t>(5 * k + j)] * a_lit(r, j) * d(j);
    return acc;
  }
};

// ---------------------------------------------------------------------------
// Closed forms from the displayed table, n = 1..7

struct ClosedFormPairing {
  cplx product;   ///< sqrt(n) (sum_j w^j z^j) (1 - z) z^{n-1}
  cplx quotient;  ///< sqrt(n) (1 - z) z^{n-1} (1 - z^d) / (1 - w z)
};

/// (root, degree) of the table row n = 1..7: third roots carry three terms,
/// fourth roots four.
inline std::pair<cplx, int> pairing_table_root(int n) {
  const cplx a = RieszBasis::a(), b = RieszBasis::b();
  switch (n) {
    case 1: return {a, 3};
    case 2: return {a * a, 3};
    case 3: return {b, 4};
    case 4: return {b * b, 4};
    case 5: return {b * b * b, 4};
    case 6: return {a, 3};
    case 7: return {a * a, 3};
    default: throw Error(Errc::out_of_range, "closed forms are tabulated for n = 1..7");
  }
}

/// Both columns of the table; the product column of row 6 is taken in the
/// row pattern (factor z^5), see b6_one_minus_z_product for the printed one.
inline ClosedFormPairing closed_form_pairing_forms(cplx z, int n) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "closed forms need |z| < 1");
  const auto [w, d] = pairing_table_root(n);
  const double s = std::sqrt(static_cast<double>(n));
  const cplx shift = std::pow(z, n - 1);
  cplx poly = 0.0;
  for (int j = d - 1; j >= 0; --j) poly = poly * (w * z) + 1.0;
  ClosedFormPairing out;
  out.product = s * poly * (1.0 - z) * shift;
  out.quotient = s * (1.0 - z) * shift * (1.0 - std::pow(z, d)) / (1.0 - w * z);
  return out;
}

/// The table's value for <F(z), b_n>; both columns must agree to 1e-12.
inline cplx closed_form_pairings(cplx z, int n) {
  const ClosedFormPairing f = closed_form_pairing_forms(z, n);
  const double scale = std::max({1.0, std::abs(f.product), std::abs(f.quotient)});
  require(std::abs(f.product - f.quotient) <= 1e-12 * scale, Errc::non_convergence,
          "product and quotient forms disagree");
  return f.quotient;
}

/// Row 6, product column exactly as displayed: sqrt(6) (1 + a z + a^2 z^2) (1 - z)^5.
inline cplx b6_one_minus_z_product(cplx z) {
  const cplx a = RieszBasis::a();
  return std::sqrt(6.0) * (1.0 + a * z + a * a * z * z) * std::pow(1.0 - z, 5);
}

// ---------------------------------------------------------------------------
// Pairing tables

enum class BasisKind { canonical, riesz };

inline std::string basis_name(BasisKind b) { return b == BasisKind::canonical ? "canonical" : "riesz"; }

struct PairingOptions {
  double tail_rel = 1e-6;            ///< tail bound relative to the l1 head
  long long max_terms = 1LL << 24;   ///< truncation budget (entries of F_m)
  std::size_t keep_values = 16;      ///< leading pairings stored in the table
};

struct PairingTable {
  cplx z;
  int m = 1;
  BasisKind basis = BasisKind::canonical;
  std::vector<cplx> values;  ///< leading pairings <F_m(z), h_n>
  double l1 = 0.0;
  double l2 = 0.0;
  long long truncation = 0;  ///< entries of F_m summed
  double tail_bound = 0.0;   ///< bound on the omitted part of l1
};

/// Pairings of F_m(z) with the chosen basis, l1 and l2 sums truncated by a
/// geometric tail bound on sum_{i>K} |F_m(z)_i|. For the block basis every
/// row has column-sum of |A| at most 5 and D_k <= 1, so its tail is at most
/// five times the canonical one.
inline PairingTable pairing_table(cplx z, int m, BasisKind basis, const PairingOptions& opts = {}) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "pairings need |z| < 1");
  require(m >= 1, Errc::bad_parameters, "m must be >= 1");
  PairingTable tab;
  tab.z = z;
  tab.m = m;
  tab.basis = basis;
  const double x = std::abs(z);
  const double scale = std::pow(std::abs(1.0 - z), m);
  const double factor = basis == BasisKind::canonical ? 1.0 : 5.0;
  // The truncation is sized against the canonical head; when the block basis
  // sums to much less, shrink the target and truncate again.
  double target = opts.tail_rel / factor;
  for (int attempt = 0; attempt < 4; ++attempt) {
    double tail = 0.0;
    double head = scale;
    long long k_cut = 1;
    if (x > 0.0) k_cut = geometric_truncation(x, m - 0.5, scale, target, opts.max_terms, tail, head);
    const long long count = basis == BasisKind::riesz ? 5 * ((k_cut + 4) / 5) : k_cut;
    const std::vector<cplx> f = F_m_entries(z, m, count);
    tab.values.clear();
    double l1 = 0.0, l2sq = 0.0;
    for (long long n = 1; n <= count; ++n) {
      const cplx v = basis == BasisKind::canonical ? f[static_cast<std::size_t>(n - 1)] : RieszBasis::pairing(f, n);
      if (tab.values.size() < opts.keep_values) tab.values.push_back(v);
      const double a = std::abs(v);
      l1 += a;
      l2sq += a * a;
    }
    tab.l1 = l1;
    tab.l2 = std::sqrt(l2sq);
    tab.truncation = count;
    tab.tail_bound = factor * tail;
    if (tab.tail_bound <= opts.tail_rel * tab.l1) return tab;
    target *= 0.5 * tab.l1 / std::max(head, tab.l1);
  }
  throw Error(Errc::tail_bound_failure, "tail bound above the requested fraction");
}

// ---------------------------------------------------------------------------
// Stolz grids

/// Points z = 1 - rho e^{i phi}: rho geometric in [d_min, rho_max) with
/// rho_max = 2 omega / (omega + 1) the far end of the domain, phi at cell
/// midpoints strictly inside |phi| < arccos(1/omega + rho (1 - 1/omega^2) / 2).
struct StolzGrid {
  int radii = 25;
  int angles = 20;
  double d_min = 1e-2;
  std::vector<cplx> explicit_points;  ///< overrides the polar grid when non-empty

  StolzGrid refined() const {
    StolzGrid g = *this;
    g.radii *= 2;
    g.angles *= 2;
    return g;
  }
};

inline std::vector<cplx> grid_points(const StolzDomain& d, const StolzGrid& g) {
  if (!g.explicit_points.empty()) return g.explicit_points;
  require(g.radii >= 1 && g.angles >= 1 && g.d_min > 0.0, Errc::bad_parameters, "invalid Stolz grid");
  const double w = d.omega();
  const double rho_max = 2.0 * w / (w + 1.0);
  require(g.d_min < rho_max, Errc::bad_parameters, "d_min beyond the domain");
  std::vector<cplx> pts;
  for (int i = 0; i < g.radii; ++i) {
    const double rho = g.d_min * std::pow(rho_max / g.d_min, static_cast<double>(i) / g.radii);
    const double phi_max = std::acos(std::min(1.0, 1.0 / w + 0.5 * rho * (1.0 - 1.0 / (w * w))));
    for (int j = 0; j < g.angles; ++j) {
      const double phi = phi_max * ((2.0 * j + 1.0) / g.angles - 1.0);
      pts.push_back(1.0 - std::polar(rho, phi));
    }
  }
  return pts;
}

struct SweepPoint {
  std::optional<PairingTable> table;  ///< empty when the tail bound failed
  cplx z;
};

inline std::vector<SweepPoint> pairing_sweep(const StolzDomain& d, int m, BasisKind basis, const StolzGrid& grid,
                                             const PairingOptions& opts = {}, unsigned threads = 1) {
  const std::vector<cplx> pts = grid_points(d, grid);
  std::vector<SweepPoint> out(pts.size());
  parallel_for(pts.size(), threads, [&](std::size_t i) {
    out[i].z = pts[i];
    try {
      out[i].table = pairing_table(pts[i], m, basis, opts);
    } catch (const Error& e) {
      if (e.code() != Errc::tail_bound_failure) throw;
    }
  });
  return out;
}

inline double sweep_sup_l1(const std::vector<SweepPoint>& sweep) {
  double s = 0.0;
  for (const SweepPoint& p : sweep)
    if (p.table) s = std::max(s, p.table->l1);
  return s;
}

inline std::string sweep_to_csv(const std::vector<SweepPoint>& sweep) {
  CsvTable table({"re_z", "im_z", "l1", "l2", "basis", "m"});
  for (const SweepPoint& p : sweep) {
    if (!p.table) continue;
    const PairingTable& t = *p.table;
    table.add_row({CsvTable::num(p.z.real()), CsvTable::num(p.z.imag()), CsvTable::num(t.l1), CsvTable::num(t.l2),
                   basis_name(t.basis), std::to_string(t.m)});
  }
  return table.str();
}

// ---------------------------------------------------------------------------
// Blow-up exponent of the canonical l1 sums

struct ExponentFit {
  double exponent = 0.0;  ///< beta in l1 ~ (1 - x)^{-beta}
  double intercept = 0.0;
  std::vector<double> xs;
  std::vector<double> l1;
};

/// Least-squares fit of log l1 against log(1 - x) on points with 1 - x
/// geometric between 1 - x_lo and 1 - x_hi.
inline ExponentFit fit_canonical_exponent(int m = 1, double x_lo = 0.9, double x_hi = 0.999, int points = 16) {
  require(points >= 2 && x_lo < x_hi && x_lo > 0.0 && x_hi < 1.0, Errc::bad_parameters, "invalid fit range");
  ExponentFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < points; ++i) {
    const double u = (1.0 - x_lo) * std::pow((1.0 - x_hi) / (1.0 - x_lo), static_cast<double>(i) / (points - 1));
    const double x = 1.0 - u;
    const double l1 = pairing_table(x, m, BasisKind::canonical).l1;
    fit.xs.push_back(x);
    fit.l1.push_back(l1);
    const double lx = std::log(u), ly = std::log(l1);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (points * sxy - sx * sy) / (points * sxx - sx * sx);
  fit.exponent = -slope;
  fit.intercept = (sy - slope * sx) / points;
  return fit;
}

inline Json pairing_table_to_json(const PairingTable& t) {
  Json vals = Json::array();
  for (const cplx v : t.values) vals.push_back(complex_to_json(v));
  return Json{{"z", complex_to_json(t.z)}, {"m", t.m},           {"basis", basis_name(t.basis)},
              {"l1", number_or_null(t.l1)}, {"l2", number_or_null(t.l2)}, {"truncation", t.truncation},
              {"tail_bound", number_or_null(t.tail_bound)}, {"values", vals}};
}

}  // namespace ritt
