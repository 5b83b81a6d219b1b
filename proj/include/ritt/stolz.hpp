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

// Stolz domains {z in D : |1 - z| / (1 - |z|) < omega} and Gauss-Legendre
// discretizations of their boundaries.
//
// The boundary of the type-theta domain is parameterized by
//   gamma(t) = 1 - r(t) e^{it},  r(t) = 2 theta / (theta^2 - 1) (theta cos t - 1),
// for t in [-C, C], C = arccos(1 / theta). Increasing t runs counterclockwise.
// Nodes are computed from s = C - |t|, the parameter distance to the vertex,
// so that points near z = 1 keep full relative accuracy in 1 - z.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ritt/error.hpp"
#include "ritt/io.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/quadrature.hpp"

namespace ritt {

class StolzDomain {
 public:
  explicit StolzDomain(double omega) : omega_(omega) {
    require(std::isfinite(omega) && omega > 1.0, Errc::bad_parameters, "Stolz type must exceed 1");
  }

  double omega() const noexcept { return omega_; }

  /// Opening half-angle arccos(1/omega) at the vertex.
  double half_angle() const noexcept { return std::acos(1.0 / omega_); }

  /// |1 - z| / (1 - |z|); +inf outside the open disc.
  static double quotient(cplx z) noexcept {
    const double m = std::abs(z);
    if (!(m < 1.0)) return std::numeric_limits<double>::infinity();
    return std::abs(1.0 - z) / (1.0 - m);
  }

  /// Strict membership, no tolerance.
  bool contains(cplx z) const noexcept {
    const double m = std::abs(z);
    return m < 1.0 && std::abs(1.0 - z) / (1.0 - m) < omega_;
  }

 private:
  double omega_;
};

/// Convex hull of {1} and the closed ball B(0, r).
class LegacyStolzRegion {
 public:
  explicit LegacyStolzRegion(double r) : r_(r) {
    require(r > 0.0 && r < 1.0, Errc::bad_parameters, "legacy region radius must lie in (0, 1)");
  }

  double radius() const noexcept { return r_; }

  bool contains(cplx z) const noexcept {
    if (std::abs(z) <= r_) return true;
    if (z == cplx(1.0, 0.0)) return true;
    // Tangent cone from the vertex, cut at the chord Re z = r^2 through the
    // two tangent points.
    if (z.real() < r_ * r_) return false;
    const cplx w = 1.0 - z;
    return std::abs(std::arg(w)) <= std::asin(r_);
  }

 private:
  double r_;
};

struct ContourResolution {
  int levels = 12;       ///< geometric grading levels toward each endpoint
  int subdivisions = 1;  ///< uniform splits of every graded panel
  int order = 16;        ///< Gauss-Legendre points per panel
};

struct ContourNode {
  double t = 0.0;
  double weight = 0.0;  ///< quadrature weight in t
  cplx z;
  cplx dz;              ///< gamma'(t)
  cplx one_minus_z;     ///< 1 - gamma(t), accurate near the vertex
  double vertex_distance = 0.0;  ///< C - |t|
};

struct ContourPanel {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t first_node = 0;
  std::size_t node_count = 0;
};

struct BoundaryPoint {
  cplx z;
  cplx dz;
};

/// Boundary point of the type-theta domain at t = sign (C - s).
inline ContourNode stolz_boundary_node(double theta, double sign, double s) {
  const double c_theta = std::acos(1.0 / theta);
  const double scale = 2.0 * theta * theta / (theta * theta - 1.0);
  // theta cos t - 1 = theta (cos t - cos C) = 2 theta sin(C - s/2) sin(s/2)
  const double r = scale * 2.0 * std::sin(c_theta - 0.5 * s) * std::sin(0.5 * s);
  const double t = sign * (c_theta - s);
  const double dr = -scale * std::sin(t);
  const cplx e = std::polar(1.0, t);
  ContourNode n;
  n.t = t;
  n.vertex_distance = s;
  n.one_minus_z = r * e;
  n.z = 1.0 - n.one_minus_z;
  n.dz = -e * cplx(dr, r);
  return n;
}

class Contour {
 public:
  static Contour build(double theta, ContourResolution res = {}) {
    require(std::isfinite(theta) && theta > 1.0, Errc::bad_parameters, "contour Stolz type must exceed 1");
    require(res.levels >= 0 && res.subdivisions >= 1 && res.order >= 8, Errc::bad_parameters,
            "contour resolution needs levels >= 0, subdivisions >= 1, order >= 8");
    Contour c;
    c.theta_ = theta;
    c.c_theta_ = std::acos(1.0 / theta);
    c.res_ = res;
    const GaussRule rule = gauss_legendre(res.order);

    // Breakpoints in s = C - |t|, ascending: 0, C 2^-L, ..., C/2, C.
    std::vector<double> breaks{0.0};
    for (int j = res.levels; j >= 0; --j) breaks.push_back(std::ldexp(c.c_theta_, -j));
    std::vector<std::pair<double, double>> pieces;  // (s_lo, s_hi), ascending
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double lo = breaks[i];
      const double hi = breaks[i + 1];
      for (int k = 0; k < res.subdivisions; ++k) {
        pieces.emplace_back(lo + (hi - lo) * k / res.subdivisions, lo + (hi - lo) * (k + 1) / res.subdivisions);
      }
    }

    auto add_panel = [&](double sign, double s_lo, double s_hi) {
      ContourPanel panel;
      panel.first_node = c.nodes_.size();
      const double half = 0.5 * (s_hi - s_lo);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        // t ascending: on the negative half s ascends, on the positive half it descends.
        const double x = sign < 0 ? rule.nodes[q] : -rule.nodes[q];
        const double s = s_lo + half * (1.0 + x);
        ContourNode node = c.node_at(sign, s);
        node.weight = half * rule.weights[q];
        c.nodes_.push_back(node);
      }
      panel.node_count = rule.nodes.size();
      panel.t_start = sign < 0 ? -(c.c_theta_ - s_lo) : c.c_theta_ - s_hi;
      panel.t_end = sign < 0 ? -(c.c_theta_ - s_hi) : c.c_theta_ - s_lo;
      c.panels_.push_back(panel);
    };
    for (const auto& [lo, hi] : pieces) add_panel(-1.0, lo, hi);
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) add_panel(1.0, it->first, it->second);
    return c;
  }

  double theta() const noexcept { return theta_; }
  double c_theta() const noexcept { return c_theta_; }
  const ContourResolution& resolution() const noexcept { return res_; }
  const std::vector<ContourNode>& nodes() const noexcept { return nodes_; }
  const std::vector<ContourPanel>& panels() const noexcept { return panels_; }

  /// Halves every panel and adds two grading levels.
  Contour refined() const {
    ContourResolution r = res_;
    r.subdivisions *= 2;
    r.levels += 2;
    return build(theta_, r);
  }

  /// Adds grading levels only (finer resolution at the vertex).
  Contour deepened(int extra_levels) const {
    ContourResolution r = res_;
    r.levels += extra_levels;
    return build(theta_, r);
  }

  /// Exact point and derivative at parameter t, |t| <= C.
  BoundaryPoint at(double t) const {
    require(std::abs(t) <= c_theta_, Errc::out_of_range, "parameter outside [-C_theta, C_theta]");
    const double sign = t < 0.0 ? -1.0 : 1.0;
    const ContourNode n = node_at(sign, c_theta_ - std::abs(t));
    return {n.z, n.dz};
  }

  /// Quadrature of the closed-curve integral of g(z) dz.
  template <class G>
  cplx integrate(G&& g) const {
    return pairwise_panels<cplx>([&](const ContourNode& n) { return n.weight * n.dz * g(n.z); });
  }

  double arc_length() const {
    return pairwise_panels<double>([](const ContourNode& n) { return n.weight * std::abs(n.dz); });
  }

  /// Sum over panels (sequential within a panel, pairwise across panels) of
  /// per-node terms; the summation order is fixed by the resolution alone.
  template <class T, class Term>
  T pairwise_panels(Term&& term) const {
    std::vector<T> panel_sums(panels_.size());
    for (std::size_t p = 0; p < panels_.size(); ++p) {
      const ContourPanel& panel = panels_[p];
      T acc = term(nodes_[panel.first_node]);
      for (std::size_t k = 1; k < panel.node_count; ++k) acc = acc + term(nodes_[panel.first_node + k]);
      panel_sums[p] = acc;
    }
    return pairwise_sum<T>(0, panel_sums.size(), [&](std::size_t i) { return panel_sums[i]; });
  }

  /// CSV with columns t, Re z, Im z, Re dz, Im dz, weight.
  std::string to_csv() const {
    CsvTable table({"t", "re_z", "im_z", "re_dz", "im_dz", "weight"});
    for (const ContourNode& n : nodes_) {
      table.add_row({CsvTable::num(n.t), CsvTable::num(n.z.real()), CsvTable::num(n.z.imag()),
                     CsvTable::num(n.dz.real()), CsvTable::num(n.dz.imag()), CsvTable::num(n.weight)});
    }
    return table.str();
  }

 private:
  Contour() = default;

  ContourNode node_at(double sign, double s) const { return stolz_boundary_node(theta_, sign, s); }

  double theta_ = 2.0;
  double c_theta_ = 0.0;
  ContourResolution res_;
  std::vector<ContourNode> nodes_;
  std::vector<ContourPanel> panels_;
};

inline BoundaryPoint boundary(const Contour& c, double t) { return c.at(t); }

inline constexpr std::size_t kMaxContourNodes = std::size_t{1} << 22;

/// Builds a contour for type theta and halves its panels until the Cauchy
/// probe (1 / 2 pi i) \oint dz / (z - z0) reproduces the winding number of
/// z0 within tol. Besides `probe` the check uses the midpoints between 0 and
/// the boundary points at t = 0 and t = +-C / 2.
inline Contour make_contour(double theta, double tol, cplx probe = 0.0, ContourResolution start = {},
                            int max_doublings = 20) {
  require(tol > 0.0, Errc::bad_parameters, "contour tolerance must be positive");
  Contour c = Contour::build(theta, start);
  const double half_c = 0.5 * c.c_theta();
  const std::vector<cplx> probes{probe, 0.5 * c.at(0.0).z, 0.5 * c.at(half_c).z, 0.5 * c.at(-half_c).z};
  const StolzDomain domain(theta);
  for (int d = 0; d <= max_doublings; ++d) {
    bool ok = true;
    for (const cplx z0 : probes) {
      const cplx expected = domain.contains(z0) ? cplx(0.0, 2.0 * std::numbers::pi) : cplx(0.0);
      const cplx q = c.integrate([&](cplx z) { return 1.0 / (z - z0); });
      ok = ok && std::abs(q - expected) <= tol;
    }
    if (ok) return c;
    if (d == max_doublings || c.nodes().size() > kMaxContourNodes / 2) break;
    c = c.refined();
  }
  throw Error(Errc::non_convergence, "contour refinement budget exhausted");
}

}  // namespace ritt
