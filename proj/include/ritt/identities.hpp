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

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ritt/holo.hpp"
#include "ritt/io.hpp"
#include "ritt/parallel.hpp"
#include "ritt/rng.hpp"
#include "ritt/series.hpp"
#include "ritt/stolz.hpp"

namespace ritt {

// ---------------------------------------------------------------------------
// Quad-precision complex arithmetic for the partial sums

using Quad = boost::multiprecision::cpp_bin_float_quad;

struct QComplex {
  Quad re = 0;
  Quad im = 0;

  QComplex() = default;
  QComplex(Quad r, Quad i) : re(std::move(r)), im(std::move(i)) {}
  explicit QComplex(cplx z) : re(z.real()), im(z.imag()) {}

  friend QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend QComplex operator*(const Quad& s, const QComplex& a) { return {s * a.re, s * a.im}; }
  QComplex inverse() const {
    const Quad d = re * re + im * im;
    return {re / d, -im / d};
  }
  Quad abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
  cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

inline QComplex qpow(const QComplex& z, int n) {
  QComplex out(Quad(1), Quad(0));
  for (int i = 0; i < n; ++i) out = out * z;
  return out;
}

inline Quad quad_eps() { return std::numeric_limits<Quad>::epsilon(); }

// ---------------------------------------------------------------------------
// Geometric-series lemma and the rising-product form

enum class LemmaIndexing {
  printed,  ///< sum_k C(k, n) (1-u)^{n+1} u^{k-1}
  shifted,  ///< sum_k C(k+n-1, n) (1-u)^{n+1} u^{k-1}, the term-wise derivative
};

inline std::string lemma_indexing_name(LemmaIndexing i) {
  return i == LemmaIndexing::printed ? "printed" : "shifted";
}

struct SeriesCheck {
  cplx value;
  cplx target;
  double deviation = 0.0;       ///< |value - target|
  double tail_bound = 0.0;      ///< truncation
  double rounding_bound = 0.0;  ///< arithmetic
  long long K = 0;

  bool within() const noexcept { return deviation <= tail_bound + rounding_bound; }
};

/// Partial sum of the lemma to K terms, compared against 1.
inline SeriesCheck lemma_identity(cplx u, int n, long long K, LemmaIndexing idx = LemmaIndexing::shifted) {
  require(std::abs(u) < 1.0, Errc::out_of_range, "lemma needs |u| < 1");
  require(n >= 0 && K >= 1, Errc::bad_parameters, "lemma needs n >= 0 and K >= 1");
  const bool shifted = idx == LemmaIndexing::shifted;
  const QComplex uq(u);
  const Quad au = uq.abs();
  QComplex pw(Quad(1), Quad(0)), sum;
  Quad abs_pw = 1, abs_sum = 0;
  Quad c = shifted || n <= 1 ? Quad(1) : Quad(0);  // coefficient of u^{k-1}
  for (long long k = 1; k <= K; ++k) {
    sum = sum + c * pw;
    abs_sum += c * abs_pw;
    if (shifted) {
      c = c * Quad(k + n) / Quad(k);
    } else if (k + 1 == n) {
      c = 1;
    } else if (k + 1 > n) {
      c = c * Quad(k + 1) / Quad(k + 1 - n);
    }
    pw = pw * uq;
    abs_pw *= au;
  }
  const QComplex factor = qpow(QComplex(cplx(1.0)) - uq, n + 1);
  const Quad af = factor.abs();
  const QComplex value = factor * sum;
  SeriesCheck out;
  out.K = K;
  out.value = value.to_cplx();
  out.target = 1.0;
  out.deviation = static_cast<double>((value - QComplex(cplx(1.0))).abs());
  const long long j = K + 1;  // first omitted index
  if (au == 0) {
    out.tail_bound = 0.0;
  } else if (!shifted && j < n) {
    out.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    const Quad rho = shifted ? Quad(j + n) / Quad(j) * au : Quad(j + 1) / Quad(j + 1 - n) * au;
    out.tail_bound = static_cast<double>(ratio_tail<Quad>(af * c * abs_pw, rho));
  }
  out.rounding_bound = static_cast<double>(Quad(8 * (K + n + 8)) * quad_eps() * (af * abs_sum + 1));
  return out;
}

/// Value the printed indexing converges to: u^{n-1} for n >= 1, 1 for n = 0.
inline cplx lemma_printed_limit(cplx u, int n) { return n == 0 ? cplx(1.0) : std::pow(u, n - 1); }

/// lhs = sum_{k<=K} k(k+1)...(k+m-1) u^{k-1} against rhs = m! / (1-u)^{m+1}.
inline SeriesCheck rising_product_identity(cplx u, int m, long long K) {
  require(std::abs(u) < 1.0, Errc::out_of_range, "rising product needs |u| < 1");
  require(m >= 1 && K >= 1, Errc::bad_parameters, "rising product needs m >= 1 and K >= 1");
  const QComplex uq(u);
  const Quad au = uq.abs();
  Quad c = 1;
  for (int j = 2; j <= m; ++j) c *= j;
  const Quad fact = c;
  QComplex pw(Quad(1), Quad(0)), sum;
  Quad abs_pw = 1, abs_sum = 0;
  for (long long k = 1; k <= K; ++k) {
    sum = sum + c * pw;
    abs_sum += c * abs_pw;
    c = c * Quad(k + m) / Quad(k);
    pw = pw * uq;
    abs_pw *= au;
  }
  const QComplex rhs = fact * qpow(QComplex(cplx(1.0)) - uq, m + 1).inverse();
  SeriesCheck out;
  out.K = K;
  out.value = sum.to_cplx();
  out.target = rhs.to_cplx();
  out.deviation = static_cast<double>((sum - rhs).abs());
  const long long j = K + 1;
  out.tail_bound = au == 0 ? 0.0 : static_cast<double>(ratio_tail<Quad>(c * abs_pw, Quad(j + m) / Quad(j) * au));
  out.rounding_bound = static_cast<double>(Quad(8 * (K + m + 8)) * quad_eps() * (abs_sum + rhs.abs()));
  return out;
}

// ---------------------------------------------------------------------------
// Pairing constant

/// R(k, j) = k (k+1) ... (k+j-1)
inline double rising(long long k, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= static_cast<double>(k + i);
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct PairingProbe {
  cplx value;             ///< sum_k sqrt(R(k,m1) R(k,m2)) z^{2k-2} (1-z)^m (1+z)^{-m}
  cplx rising_sum;        ///< the same with R(k, m) in place of the square roots
  double claimed = 0.0;   ///< m!
  bool has_closed_form = false;
  cplx closed_form;       ///< m1! (1-z)^{m1-1} / (1+z)^{3 m1 + 1} when m1 = m2
  cplx rising_closed_form;  ///< m! / ((1+z)^{2m+1} (1-z))
  double tail_bound = 0.0;
  long long K = 0;
};

inline PairingProbe pairing_constant_probe(cplx z, int m1, int m2, long long K) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "pairing probe needs |z| < 1");
  require(m1 >= 1 && m2 >= 1 && K >= 1, Errc::bad_parameters, "pairing probe needs m1, m2, K >= 1");
  const int m = m1 + m2;
  const cplx pref = std::pow(1.0 - z, m) * std::pow(1.0 + z, -m);
  const cplx z2 = z * z;
  const double a2 = std::norm(z);
  PairingProbe out;
  out.K = K;
  out.claimed = factorial(m);
  cplx pw = 1.0, s = 0.0, r = 0.0;
  double apw = 1.0;
  for (long long k = 1; k <= K; ++k) {
    s += std::sqrt(rising(k, m1) * rising(k, m2)) * pw;
    r += rising(k, m) * pw;
    pw *= z2;
    apw *= a2;
  }
  out.value = pref * s;
  out.rising_sum = pref * r;
  const double j = static_cast<double>(K + 1);
  const double ap = std::abs(pref);
  const double t1 = ratio_tail(ap * std::sqrt(rising(K + 1, m1) * rising(K + 1, m2)) * apw,
                               std::sqrt((j + m1) * (j + m2)) / j * a2);
  const double t2 = ratio_tail(ap * rising(K + 1, m) * apw, (j + m) / j * a2);
  out.tail_bound = a2 == 0.0 ? 0.0 : std::max(t1, t2);
  if (m1 == m2) {
    out.has_closed_form = true;
    out.closed_form = factorial(m1) * std::pow(1.0 - z, m1 - 1) * std::pow(1.0 + z, -(3 * m1 + 1));
  }
  out.rising_closed_form = factorial(m) / (std::pow(1.0 + z, 2 * m + 1) * (1.0 - z));
  return out;
}

// ---------------------------------------------------------------------------
// Representation formula

struct RatioProbe {
  cplx ratio;      ///< sum_{k<=K} m_k(z) phi_{m1}(k,z) phi_{m2}(k,z) / f(z)
  cplx candidate;  ///< [1 - (1-z^3)^{m+1}] / ((m+1) z^3)
  double tail_bound = 0.0;
  long long K = 0;
};

/// [1 - (1-u)^{m+1}] / ((m+1) u), u = z^3, expanded as a polynomial in u.
inline cplx representation_candidate(cplx z, int m) {
  const cplx u = z * z * z;
  cplx acc = 0.0, pw = 1.0;
  double binom = m + 1;  // C(m+1, j)
  for (int j = 1; j <= m + 1; ++j) {
    acc += (j % 2 == 1 ? 1.0 : -1.0) * binom * pw;
    binom = binom * (m + 1 - j) / (j + 1);
    pw *= u;
  }
  return acc / static_cast<double>(m + 1);
}

/// Partial sum of the representation formula with
/// m_k(z) = f(z) (1+z+z^2)^{m+1} / (m+1)! * prod_{j<=m} (k+j)/k * k (1-z) z^{k-1}
/// and phi_m(k, z) = k^{m-1/2} z^{k-1} (1-z)^m, divided by f(z).
inline RatioProbe representation_ratio(cplx z, const HoloFn& f, int m1, int m2, long long K) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "representation ratio needs |z| < 1");
  require(m1 >= 1 && m2 >= 1 && K >= 1, Errc::bad_parameters, "representation ratio needs m1, m2, K >= 1");
  const cplx fz = f(z);
  require(fz != 0.0, Errc::bad_parameters, "f(z) must be nonzero");
  const int m = m1 + m2;
  const cplx front = fz * std::pow(1.0 + z + z * z, m + 1) / factorial(m + 1);
  const cplx one_minus = 1.0 - z;
  const cplx p1 = std::pow(one_minus, m1), p2 = std::pow(one_minus, m2);
  cplx zk = 1.0, sum = 0.0;  // zk = z^{k-1}
  for (long long k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    double prod = 1.0;
    for (int j = 1; j <= m; ++j) prod *= (kd + j) / kd;
    const cplx mk = front * prod * kd * one_minus * zk;
    const cplx phi1 = std::pow(kd, m1 - 0.5) * zk * p1;
    const cplx phi2 = std::pow(kd, m2 - 0.5) * zk * p2;
    sum += mk * phi1 * phi2;
    zk *= z;
  }
  RatioProbe out;
  out.K = K;
  out.ratio = sum / fz;
  out.candidate = representation_candidate(z, m);
  // |term_k / f| = |1 - z^3|^{m+1} / (m+1)! * R(k+1, m) |z|^{3(k-1)}
  const double a3 = std::pow(std::abs(z), 3);
  const double j = static_cast<double>(K + 1);
  const double next = std::pow(std::abs(1.0 - z * z * z), m + 1) / factorial(m + 1) * rising(K + 2, m) *
                      std::pow(a3, static_cast<double>(K));
  out.tail_bound = a3 == 0.0 ? 0.0 : ratio_tail(next, (j + 1 + m) / (j + 1) * a3);
  return out;
}

// ---------------------------------------------------------------------------
// The even-power display

struct Step2Probe {
  cplx lhs;          ///< (2k-2)^{m-1} (1-z)^{m-1} z^{2k-2}
  cplx first_line;   ///< 2(1+z) sum_{j=k}^{k+J-1} (k-1)^{m-1} (1-z)^m z^{2j-2}
  double first_tail = 0.0;
  cplx second_line;  ///< 2(1+z) sum_{j=k}^{k+J-1} ((k-1)/j)^{m-1} (j^{m1-1/2}(1-z)^{m1} z^{k-1}) (j^{m2-1/2}(1-z)^{m2} z^{k-1})
  long long J = 0;
};

inline Step2Probe step2_probe(cplx z, int m1, int m2, long long k, long long J) {
  require(std::abs(z) < 1.0, Errc::out_of_range, "step probe needs |z| < 1");
  require(m1 >= 1 && m2 >= 1 && k >= 1 && J >= 1, Errc::bad_parameters, "step probe needs m1, m2, k, J >= 1");
  const int m = m1 + m2;
  const double km1 = static_cast<double>(k - 1);
  const cplx zk = std::pow(z, static_cast<double>(k - 1));
  Step2Probe out;
  out.J = J;
  out.lhs = std::pow(2.0 * km1, m - 1) * std::pow(1.0 - z, m - 1) * zk * zk;
  const cplx front = 2.0 * (1.0 + z);
  cplx first = 0.0, second = 0.0;
  cplx zj = zk * zk;  // z^{2j-2}
  for (long long j = k; j < k + J; ++j) {
    const double jd = static_cast<double>(j);
    first += std::pow(km1, m - 1) * std::pow(1.0 - z, m) * zj;
    second += std::pow(km1 / jd, m - 1) * (std::pow(jd, m1 - 0.5) * std::pow(1.0 - z, m1) * zk) *
              (std::pow(jd, m2 - 0.5) * std::pow(1.0 - z, m2) * zk);
    zj *= z * z;
  }
  out.first_line = front * first;
  out.second_line = front * second;
  const double a2 = std::norm(z);
  out.first_tail = std::abs(front) * std::pow(km1, m - 1) * std::pow(std::abs(1.0 - z), m) *
                   std::pow(a2, static_cast<double>(k - 1 + J)) / (1.0 - a2);
  return out;
}

// ---------------------------------------------------------------------------
// Multiplier series

struct MultiplierSums {
  int m = 3;
  std::vector<double> sums;        ///< index n-1
  std::vector<double> half_width;  ///< rigorous enclosure radius from integral comparison
  int argmax = 1;
  double sup = 0.0;
};

/// For m = 3: s_n = sum_{k>=n} n / k^2; for m = 4: s_n = sum_{k>=n} n (k-n+1) / k^3.
inline MultiplierSums multiplier_bounds(int n_max, int m, unsigned threads = 1) {
  require(m == 3 || m == 4, Errc::bad_parameters, "multiplier series exist for m = 3, 4");
  require(n_max >= 1, Errc::bad_parameters, "n_max must be positive");
  MultiplierSums out;
  out.m = m;
  out.sums.resize(static_cast<std::size_t>(n_max));
  out.half_width.resize(static_cast<std::size_t>(n_max));
  parallel_for(static_cast<std::size_t>(n_max), threads, [&](std::size_t idx) {
    const double n = static_cast<double>(idx + 1);
    const long long K = 100 * static_cast<long long>(idx + 1) + 20000;
    auto term = [&](double k) { return m == 3 ? n / (k * k) : n * (k - n + 1.0) / (k * k * k); };
    // integral of the term from a to infinity
    auto integral = [&](double a) { return m == 3 ? n / a : n / a - n * (n - 1.0) / (2.0 * a * a); };
    long double head = 0.0L;
    for (long long k = K; k >= static_cast<long long>(idx + 1); --k) head += term(static_cast<double>(k));
    const double lo = integral(static_cast<double>(K + 1));
    const double hi = integral(static_cast<double>(K));
    out.sums[idx] = static_cast<double>(head) + 0.5 * (lo + hi);
    out.half_width[idx] = 0.5 * (hi - lo) + 1e-15 * static_cast<double>(K);
  });
  const auto it = std::max_element(out.sums.begin(), out.sums.end());
  out.argmax = static_cast<int>(it - out.sums.begin()) + 1;
  out.sup = *it;
  return out;
}

// ---------------------------------------------------------------------------
// Contour L1 norms of k z^{k-1}

struct ContourL1 {
  double value = 0.0;
  double change = 0.0;  ///< difference to the previous refinement
  int refinements = 0;
  std::size_t nodes = 0;
};

/// int over the type-theta contour of k |z|^{k-1} |dz|.
inline ContourL1 contour_l1_bound(double theta, long long k, double tol = 1e-10, int max_refinements = 10) {
  require(theta > 1.0, Errc::bad_parameters, "theta must exceed 1");
  require(k >= 1, Errc::bad_parameters, "k must be positive");
  ContourResolution res;
  res.levels = 12 + static_cast<int>(std::ceil(std::log2(static_cast<double>(k))));
  Contour c = Contour::build(theta, res);
  const double kd = static_cast<double>(k);
  auto eval = [&](const Contour& ct) {
    return ct.pairwise_panels<double>([&](const ContourNode& n) {
      const cplx w = n.one_minus_z;  // |z|^2 = 1 - 2 Re w + |w|^2
      const double log_abs = 0.5 * std::log1p(-2.0 * w.real() + std::norm(w));
      return n.weight * std::abs(n.dz) * kd * std::exp((kd - 1.0) * log_abs);
    });
  };
  ContourL1 out;
  double prev = eval(c);
  for (int r = 1; r <= max_refinements; ++r) {
    c = c.refined();
    const double v = eval(c);
    out.value = v;
    out.change = std::abs(v - prev);
    out.refinements = r;
    out.nodes = c.nodes().size();
    if (out.change <= tol * v) return out;
    prev = v;
  }
  throw Error(Errc::non_convergence, "contour L1 quadrature did not settle");
}

// ---------------------------------------------------------------------------
// Reports

struct IdentityReport {
  std::string name;
  Json grid = Json::array();
  double max_abs_deviation = 0.0;
  long long truncation_K = 0;
  double tail_bound = 0.0;
  bool verified = false;
  std::string pattern;  ///< description of the observed deviation
  Json details = Json::object();

  std::string verdict() const { return verified ? "verified" : "deviates(" + pattern + ")"; }
};

inline Json identity_report_to_json(const IdentityReport& r) {
  Json j;
  j["name"] = r.name;
  j["grid"] = r.grid;
  j["max_abs_deviation"] = number_or_null(r.max_abs_deviation);
  j["truncation_K"] = r.truncation_K;
  j["tail_bound"] = number_or_null(r.tail_bound);
  j["verdict"] = r.verdict();
  j["details"] = r.details;
  return j;
}

/// 50 points u = 0.9 sqrt(U) e^{2 pi i V} plus fixed examples.
inline std::vector<cplx> lemma_grid(std::uint64_t seed, int count = 50) {
  std::vector<cplx> out{0.5, cplx(0.3, 0.2), cplx(0.0, 0.4), -0.9, cplx(0.0, 0.0)};
  CounterRng rng(seed, 0x1e3a);
  for (int i = 0; i < count; ++i) {
    const double r = 0.9 * std::sqrt(rng.uniform());
    out.push_back(std::polar(r, 2.0 * std::numbers::pi * rng.uniform()));
  }
  return out;
}

namespace detail {

template <class Check>
IdentityReport series_report(std::string name, const std::vector<cplx>& us, const std::vector<int>& orders,
                             unsigned threads, Check&& check) {
  struct Cell {
    cplx u;
    int order;
  };
  std::vector<Cell> cells;
  for (int o : orders) {
    for (cplx u : us) cells.push_back({u, o});
  }
  std::vector<SeriesCheck> res(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) { res[i] = check(cells[i].u, cells[i].order); });
  IdentityReport r;
  r.name = std::move(name);
  r.verified = true;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    r.grid.push_back({{"u", complex_to_json(cells[i].u)}, {"order", cells[i].order},
                      {"deviation", res[i].deviation}, {"bound", res[i].tail_bound + res[i].rounding_bound}});
    r.max_abs_deviation = std::max(r.max_abs_deviation, res[i].deviation);
    r.tail_bound = std::max(r.tail_bound, res[i].tail_bound + res[i].rounding_bound);
    r.truncation_K = res[i].K;
    if (!res[i].within()) r.verified = false;
  }
  return r;
}

}  // namespace detail

struct IdentityOptions {
  long long K = 500;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Lemma with the index shift that the term-wise derivative produces.
inline IdentityReport lemma_suite(const IdentityOptions& o) {
  IdentityReport r = detail::series_report("lemma", lemma_grid(o.seed), {0, 1, 2, 3, 4, 5, 6}, o.threads,
                                           [&](cplx u, int n) { return lemma_identity(u, n, o.K); });
  r.pattern = "partial sum differs from 1 beyond the tail bound";
  r.details["indexing"] = lemma_indexing_name(LemmaIndexing::shifted);
  return r;
}

/// Lemma exactly as printed: the sum tends to u^{n-1} instead of 1.
inline IdentityReport lemma_printed_suite(const IdentityOptions& o) {
  const std::vector<cplx> us = lemma_grid(o.seed);
  const std::vector<int> orders{0, 1, 2, 3, 4, 5, 6};
  IdentityReport r = detail::series_report("lemma_printed", us, orders, o.threads,
                                           [&](cplx u, int n) { return lemma_identity(u, n, o.K, LemmaIndexing::printed); });
  double limit_gap = 0.0;
  bool limit_ok = true;
  for (int n : orders) {
    for (cplx u : us) {
      const SeriesCheck c = lemma_identity(u, n, o.K, LemmaIndexing::printed);
      const double gap = std::abs(c.value - lemma_printed_limit(u, n));
      limit_gap = std::max(limit_gap, gap);
      if (gap > c.tail_bound + c.rounding_bound + 1e-15) limit_ok = false;
    }
  }
  r.pattern = "sum equals u^(n-1); equals 1 only for n <= 1";
  r.details["indexing"] = lemma_indexing_name(LemmaIndexing::printed);
  r.details["max_gap_to_u_pow_n_minus_1"] = limit_gap;
  r.details["matches_u_pow_n_minus_1"] = limit_ok;
  return r;
}

inline IdentityReport rising_suite(const IdentityOptions& o) {
  IdentityReport r = detail::series_report("rising_product", lemma_grid(o.seed), {1, 2, 3, 4, 5, 6}, o.threads,
                                           [&](cplx u, int m) { return rising_product_identity(u, m, o.K); });
  r.pattern = "partial sum differs from m!/(1-u)^(m+1) beyond the tail bound";
  return r;
}

inline std::vector<cplx> probe_points() {
  return {0.0, 0.5, -0.4, cplx(0.3, 0.2), cplx(0.0, 0.6), cplx(-0.2, -0.5), 0.9};
}

inline IdentityReport pairing_suite(const IdentityOptions& o) {
  IdentityReport r;
  r.name = "pairing_constant";
  r.truncation_K = o.K;
  bool closed_ok = true;
  double worst_closed = 0.0;
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}, {3, 3}}) {
    for (cplx z : probe_points()) {
      const PairingProbe p = pairing_constant_probe(z, m1, m2, o.K);
      const double dev = std::abs(p.value - p.claimed);
      Json cell{{"z", complex_to_json(z)}, {"m1", m1}, {"m2", m2}, {"value", complex_to_json(p.value)},
                {"claimed", p.claimed}, {"rising_sum", complex_to_json(p.rising_sum)}, {"tail_bound", p.tail_bound}};
      if (p.has_closed_form) {
        const double gap = std::abs(p.value - p.closed_form);
        cell["closed_form"] = complex_to_json(p.closed_form);
        worst_closed = std::max(worst_closed, gap);
        if (gap > 10.0 * p.tail_bound + 1e-12 * std::max(1.0, std::abs(p.closed_form))) closed_ok = false;
      }
      r.grid.push_back(cell);
      r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
      r.tail_bound = std::max(r.tail_bound, p.tail_bound);
    }
  }
  r.verified = r.max_abs_deviation <= 10.0 * r.tail_bound;
  r.pattern = "value is z-dependent; for m1 = m2 it equals m1! (1-z)^(m1-1) / (1+z)^(3 m1 + 1), not m!";
  r.details["closed_form_max_gap"] = worst_closed;
  r.details["closed_form_matches"] = closed_ok;
  return r;
}

inline IdentityReport ratio_suite(const IdentityOptions& o) {
  IdentityReport r;
  r.name = "representation_ratio";
  r.truncation_K = o.K;
  const HoloFn f = HoloFn::polynomial({1.0, 1.0, 2.0});
  const HoloFn g = HoloFn::cayley();
  const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  double f_gap = 0.0, z3_gap = 0.0, cand_gap = 0.0;
  bool cand_ok = true;
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
    for (cplx z : {cplx(0.5), cplx(0.1), cplx(-0.3, 0.4), cplx(0.0, 0.6), cplx(0.7, -0.1), cplx(1e-3)}) {
      const RatioProbe a = representation_ratio(z, f, m1, m2, o.K);
      const RatioProbe b = representation_ratio(z, g, m1, m2, o.K);
      const RatioProbe c = representation_ratio(z * rot, f, m1, m2, o.K);
      f_gap = std::max(f_gap, std::abs(a.ratio - b.ratio));
      z3_gap = std::max(z3_gap, std::abs(a.ratio - c.ratio));
      const double gap = std::abs(a.ratio - a.candidate);
      cand_gap = std::max(cand_gap, gap);
      if (gap > 10.0 * a.tail_bound + 1e-12) cand_ok = false;
      r.grid.push_back({{"z", complex_to_json(z)}, {"m1", m1}, {"m2", m2}, {"ratio", complex_to_json(a.ratio)},
                        {"candidate", complex_to_json(a.candidate)}, {"tail_bound", a.tail_bound}});
      r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(a.ratio - 1.0));
      r.tail_bound = std::max(r.tail_bound, a.tail_bound);
    }
  }
  r.verified = r.max_abs_deviation <= 10.0 * r.tail_bound;
  r.pattern = "ratio = [1-(1-z^3)^(m+1)]/((m+1) z^3), tends to 1 only as z -> 0";
  r.details["f_independence_gap"] = f_gap;
  r.details["z3_rotation_gap"] = z3_gap;
  r.details["candidate_gap"] = cand_gap;
  r.details["candidate_matches"] = cand_ok;
  return r;
}

inline IdentityReport step2_suite(const IdentityOptions& o) {
  IdentityReport r;
  r.name = "even_power_display";
  r.truncation_K = o.K;
  bool factor_ok = true;
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
    for (cplx z : {cplx(0.5), cplx(0.3, 0.2), cplx(-0.4)}) {
      for (long long k : {2LL, 5LL}) {
        const Step2Probe p = step2_probe(z, m1, m2, k, o.K);
        const Step2Probe half = step2_probe(z, m1, m2, k, o.K / 2);
        const double dev = std::abs(p.lhs - p.first_line);
        const cplx expected = std::pow(2.0, m1 + m2 - 2) * p.first_line;
        if (std::abs(p.lhs - expected) > 10.0 * std::pow(2.0, m1 + m2 - 2) * p.first_tail + 1e-12 * std::abs(p.lhs)) {
          factor_ok = false;
        }
        r.grid.push_back({{"z", complex_to_json(z)}, {"m1", m1}, {"m2", m2}, {"k", k},
                          {"lhs", complex_to_json(p.lhs)}, {"first_line", complex_to_json(p.first_line)},
                          {"second_line", complex_to_json(p.second_line)},
                          {"second_line_half_J", complex_to_json(half.second_line)}});
        r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
        r.tail_bound = std::max(r.tail_bound, p.first_tail);
      }
    }
  }
  r.verified = r.max_abs_deviation <= 10.0 * r.tail_bound;
  r.pattern = "first line equals lhs / 2^(m-2); second line has j-independent terms and grows linearly in J";
  r.details["factor_2_pow_m_minus_2_matches"] = factor_ok;
  return r;
}

inline IdentityReport multiplier_suite(const IdentityOptions& o) {
  IdentityReport r;
  r.name = "multipliers";
  r.verified = true;
  const int n_max = 200;
  for (int m : {3, 4}) {
    const MultiplierSums s = multiplier_bounds(n_max, m, o.threads);
    const double basel = std::numbers::pi * std::numbers::pi / 6.0;
    const double dev = std::abs(s.sums[0] - basel);
    r.max_abs_deviation = std::max(r.max_abs_deviation, dev);
    r.tail_bound = std::max(r.tail_bound, s.half_width[0]);
    if (dev > s.half_width[0] || s.argmax > 3 || !std::isfinite(s.sup)) r.verified = false;
    r.grid.push_back({{"m", m}, {"n_max", n_max}, {"sup", s.sup}, {"argmax", s.argmax},
                      {"s_1", s.sums[0]}, {"s_n_max", s.sums.back()}});
  }
  r.pattern = "multiplier sums unbounded or maximal away from small n";
  return r;
}

inline IdentityReport contour_suite(const IdentityOptions& o) {
  IdentityReport r;
  r.name = "contour_l1";
  r.verified = true;
  const std::vector<long long> ks{1, 10, 100, 1000, 10000};
  for (double theta : {2.0, 3.0}) {
    std::vector<ContourL1> vals(ks.size());
    parallel_for(ks.size(), o.threads, [&](std::size_t i) { vals[i] = contour_l1_bound(theta, ks[i]); });
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    Json seq = Json::array();
    for (std::size_t i = 0; i < ks.size(); ++i) {
      seq.push_back({{"k", ks[i]}, {"value", vals[i].value}, {"change", vals[i].change}});
      r.tail_bound = std::max(r.tail_bound, vals[i].change);
      if (ks[i] >= 10) {
        lo = std::min(lo, vals[i].value);
        hi = std::max(hi, vals[i].value);
      }
    }
    const double spread = hi / lo;
    if (!(spread <= 2.0)) r.verified = false;
    r.max_abs_deviation = std::max(r.max_abs_deviation, spread - 1.0);
    r.grid.push_back({{"theta", theta}, {"sequence", seq}, {"max_over_min_k_ge_10", spread}});
  }
  r.pattern = "max/min over k >= 10 exceeds 2";
  return r;
}

inline const std::vector<std::string>& identity_suite_names() {
  static const std::vector<std::string> names{"lemma", "lemma-printed", "rising", "pairing",
                                              "ratio", "step2",         "multipliers", "contour"};
  return names;
}

inline std::vector<IdentityReport> run_identity_suite(const std::string& suite, const IdentityOptions& o) {
  if (suite == "all") {
    std::vector<IdentityReport> out;
    for (const std::string& s : identity_suite_names()) {
      auto part = run_identity_suite(s, o);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  require(o.K >= 1, Errc::bad_parameters, "K must be positive");
  if (suite == "lemma") return {lemma_suite(o)};
  if (suite == "lemma-printed") return {lemma_printed_suite(o)};
  if (suite == "rising") return {rising_suite(o)};
  if (suite == "pairing") return {pairing_suite(o)};
  if (suite == "ratio") return {ratio_suite(o)};
  if (suite == "step2") return {step2_suite(o)};
  if (suite == "multipliers") return {multiplier_suite(o)};
  if (suite == "contour") return {contour_suite(o)};
  throw Error(Errc::bad_parameters, "unknown identity suite '" + suite + "'");
}

}  // namespace ritt
