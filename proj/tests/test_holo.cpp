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

#include "ritt/holo.hpp"

using namespace ritt;
using namespace std::complex_literals;

namespace {

double brute_force_sup(const HoloFn& f, double omega, int points) {
  const double c = std::acos(1.0 / omega);
  const Contour contour = Contour::build(omega);
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = -c + 2.0 * c * (i + 0.5) / points;
    best = std::max(best, std::abs(f(boundary(contour, t).z)));
  }
  return best;
}

}  // namespace

TEST(HoloFn, Evaluation) {
  const HoloFn p = HoloFn::polynomial({1.0, 2.0, 3.0});
  EXPECT_NEAR(std::abs(p(2.0) - 17.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(*p.derivative(2.0) - 14.0), 0.0, 1e-14);
  const HoloFn r = HoloFn::rational({1.0}, {2.0, -1.0});
  EXPECT_NEAR(std::abs(r(0.5) - 1.0 / 1.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(*r.derivative(0.5) - 1.0 / 2.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(HoloFn::monomial(5)(0.5i) - std::pow(0.5i, 5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(HoloFn::cayley()(0.5) - 1.0 / 3.0), 0.0, 1e-15);
  const HoloFn o = HoloFn::opaque([](cplx z) { return std::exp(z); });
  EXPECT_FALSE(o.derivative(0.0).has_value());
  EXPECT_NEAR(std::abs(o(0.0) - 1.0), 0.0, 0.0);
}

TEST(HoloFn, ProductIsExactForAlgebraicKinds) {
  const HoloFn e = HoloFn::cayley();
  const HoloFn inv = HoloFn::rational({1.0, 1.0}, {1.0, -1.0});
  const HoloFn prod = e * inv;
  EXPECT_TRUE(prod.is_algebraic());
  CounterRng rng(3, 0);
  for (int i = 0; i < 100; ++i) {
    const cplx z = std::polar(0.9 * std::sqrt(rng.uniform()), 6.283185307179586 * rng.uniform());
    EXPECT_NEAR(std::abs(prod(z) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(e(z) * inv(z) - 1.0), 0.0, 1e-12);
  }
  const HoloFn mixed = e * HoloFn::opaque([](cplx z) { return z; });
  EXPECT_FALSE(mixed.is_algebraic());
  EXPECT_NEAR(std::abs(mixed(0.5) - 0.5 / 3.0), 0.0, 1e-15);
}

TEST(HoloFn, ApplyDirect) {
  Matrix t(2, 2);
  t << 0.5, 0.1, 0.0, -0.2;
  const Matrix e = *HoloFn::cayley().apply_direct(t);
  const Matrix ref = (Matrix::Identity(2, 2) + t).partialPivLu().solve(Matrix::Identity(2, 2) - t);
  EXPECT_LE((e - ref).norm(), 1e-14);
  const Matrix p = *HoloFn::polynomial({0.0, 1.0, -1.0}).apply_direct(t);
  EXPECT_LE((p - t * (Matrix::Identity(2, 2) - t)).norm(), 1e-15);
}

TEST(HoloFn, PoleCertificate) {
  const StolzDomain d(2.0);
  EXPECT_TRUE(pole_free(HoloFn::cayley(), d));
  EXPECT_TRUE(pole_free(HoloFn::rational({1.0}, {2.0, -1.0}), d));
  EXPECT_FALSE(pole_free(HoloFn::rational({1.0}, {1.0, -1.0}), d));    // pole at the vertex
  EXPECT_FALSE(pole_free(HoloFn::rational({1.0}, {0.2, 1.0}), d));     // pole at -0.2
  EXPECT_FALSE(pole_free(HoloFn::opaque([](cplx z) { return z; }), d));
  EXPECT_THROW(sup_norm(HoloFn::rational({1.0}, {0.2, 1.0}), d), Error);
}

TEST(SupNorm, Examples) {
  const StolzDomain d(2.0);
  EXPECT_NEAR(sup_norm(HoloFn::polynomial({0.0, 1.0}), d), 1.0, 1e-12);
  EXPECT_NEAR(sup_norm(HoloFn::constant(1.0), d), 1.0, 0.0);
  const double e = sup_norm(HoloFn::cayley(), d);
  const double oracle = brute_force_sup(HoloFn::cayley(), 2.0, 1000000);
  EXPECT_NEAR(e, oracle, 0.01 * oracle);
  EXPECT_LE(e, oracle * (1.0 + 1e-9));
}

TEST(SupNorm, MonotoneUnderInclusion) {
  const std::vector<HoloFn> fs = {HoloFn::cayley(), HoloFn::polynomial({0.0, 1.0, -1.0}),
                                  HoloFn::rational({1.0}, {2.0, -1.0}), HoloFn::monomial(3)};
  for (const HoloFn& f : fs) {
    double prev = 0.0;
    for (double w : {1.2, 1.5, 2.0, 3.0, 6.0}) {
      const double s = sup_norm(f, StolzDomain(w));
      EXPECT_GE(s * 1.01, prev);
      prev = s;
    }
  }
}

TEST(SupNorm, Submultiplicative) {
  const StolzDomain d(2.5);
  const std::vector<HoloFn> fs = {HoloFn::cayley(), HoloFn::polynomial({0.3, 1.0, -1.0}),
                                  HoloFn::rational({1.0, 0.5i}, {3.0, 1.0}), HoloFn::monomial(4)};
  for (const HoloFn& f : fs)
    for (const HoloFn& g : fs) EXPECT_LE(sup_norm(f * g, d), sup_norm(f, d) * sup_norm(g, d) * 1.01);
}

TEST(Admissible, Examples) {
  const Contour c = Contour::build(2.0);
  const AdmissibilityCert a = admissible(HoloFn::polynomial({1.0, -2.0, 1.0}), c);
  EXPECT_TRUE(a.integrable) << a.diagnostic;
  EXPECT_TRUE(std::isfinite(a.l1_value));
  const AdmissibilityCert one = admissible(HoloFn::constant(1.0), c);
  EXPECT_FALSE(one.integrable) << one.diagnostic;
  // k z^{k-1}(1 - z), k = 5
  const HoloFn f = HoloFn::polynomial({0.0, 0.0, 0.0, 0.0, 5.0, -5.0});
  EXPECT_TRUE(admissible(f, c).integrable);
  EXPECT_TRUE(admissible(HoloFn::cayley(), c).integrable);
}

TEST(Admissible, StableUnderRefinement) {
  const Contour c = Contour::build(2.0);
  const HoloFn f = HoloFn::cayley() * HoloFn::rational({1.0}, {2.0, -1.0});
  const AdmissibilityCert a = admissible(f, c);
  ASSERT_TRUE(a.integrable);
  const double again = contour_l1(f, c.refined().deepened(24));
  EXPECT_NEAR(again, a.l1_value, 0.05 * a.l1_value);
}

TEST(Admissible, FractionalPowerIsIntegrable) {
  const Contour c = Contour::build(2.0);
  const HoloFn f = HoloFn::opaque([](cplx z) { return std::sqrt(1.0 - z); });
  EXPECT_TRUE(admissible(f, c).integrable);
}
