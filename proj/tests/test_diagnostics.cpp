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

#include <numbers>

#include "ritt/diagnostics.hpp"
#include "ritt/zoo.hpp"

using namespace ritt;
using namespace std::complex_literals;

constexpr double kPi = std::numbers::pi;

namespace {

Operator diag(std::initializer_list<cplx> d, double p = 2.0) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (cplx v : d) m(i, i) = v, ++i;
  return Operator(m, p);
}

}  // namespace

TEST(RittConstant, Identity) {
  EXPECT_NEAR(ritt_constant(Operator(identity(3))).value, 1.0, 1e-12);
}

TEST(RittConstant, ZeroOperatorApproachesTwo) {
  const RittConstantReport r = ritt_constant(Operator(Matrix::Zero(2, 2)));
  EXPECT_LE(r.value, 2.0);
  EXPECT_NEAR(r.value, 2.0, 1e-3);
  EXPECT_FALSE(r.growing);
}

TEST(RittConstant, RotationGrows) {
  const RittConstantReport r = ritt_constant(generate(ZooSpec::rotation(kPi / 2)));
  EXPECT_TRUE(r.growing);
  EXPECT_GT(r.value, 1e5);
}

TEST(RittConstant, DominatesRealAxisEigenvalueOracle) {
  const Operator t = diag({0.8, 0.3, -0.5});
  const double k = ritt_constant(t).value;
  for (int j = 1; j <= 20; ++j) {
    const double lambda = 1.0 + std::ldexp(1.0, -j);
    EXPECT_GE(k * (1.0 + 1e-12), (lambda - 1.0) / (lambda - 0.8));
  }
  EXPECT_GE(k, 1.0 - 1e-9);
}

TEST(RittConstant, LpContextAndCsv) {
  const RittGrid grid{.radius_levels = 4, .angles = 8, .refine_levels = 2};
  const RittConstantReport r = ritt_constant(diag({0.5, -0.2}, 3.0), grid);
  EXPECT_GT(r.value, 0.0);
  EXPECT_EQ(r.samples.size(), 4U * ritt_angles(grid).size());
  EXPECT_EQ(r.to_csv().substr(0, 24), "re_lambda,im_lambda,norm");
}

TEST(RittConstant, ThreadIndependent) {
  const Operator t = generate(ZooSpec::jordan(0.5, 4, 0.3));
  const RittConstantReport a = ritt_constant(t, {}, 1);
  const RittConstantReport b = ritt_constant(t, {}, 4);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.to_csv(), b.to_csv());
}

TEST(PowerBound, Examples) {
  const PowerBound rot = power_bound(generate(ZooSpec::rotation(0.37)), 100);
  EXPECT_NEAR(rot.value, 1.0, 1e-12);
  EXPECT_FALSE(rot.growing);
  EXPECT_NEAR(power_bound(diag({0.5}), 100).value, 0.5, 1e-15);

  const Operator j = generate(ZooSpec::jordan(0.9, 2, 1.0));
  const PowerBound pb = power_bound(j, 200);
  double oracle = 0.0;
  Matrix power = identity(2);
  for (int n = 1; n <= 200; ++n) {
    power = power * j.matrix();
    oracle = std::max(oracle, spectral_norm(power));
  }
  EXPECT_NEAR(pb.value, oracle, 1e-10 * oracle);
  EXPECT_FALSE(pb.growing);
}

TEST(PowerBound, Overflow) {
  const PowerBound pb = power_bound(diag({1.5}), 200);
  EXPECT_TRUE(pb.overflow);
  EXPECT_TRUE(pb.growing);
}

TEST(DdBound, Examples) {
  const DdBound rot = dd_bound(generate(ZooSpec::rotation(kPi / 2)), 400);
  EXPECT_NEAR(rot.value, 400.0 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(rot.trend, 1.0, 1e-9);
  EXPECT_EQ(dd_bound(Operator(identity(2)), 50).value, 0.0);

  const DdBound half = dd_bound(diag({0.5}), 200);
  double oracle = 0.0;
  for (int k = 1; k <= 200; ++k) oracle = std::max(oracle, k * 0.5 * std::pow(0.5, k - 1));
  EXPECT_NEAR(half.value, oracle, 1e-15);
  EXPECT_NEAR(half.value, 0.5, 1e-15);
}

TEST(StolzType, Examples) {
  EXPECT_NEAR(stolz_type_of_spectrum(diag({0.0, 0.5})).value, 1.0, 1e-15);
  const double r = std::sqrt(2.0) / 2.0;
  EXPECT_NEAR(stolz_type_of_spectrum(diag({(1.0 + 1i) / 2.0})).value, r / (1.0 - r), 1e-12);
  EXPECT_TRUE(stolz_type_of_spectrum(generate(ZooSpec::rotation(kPi / 2))).infinite);
  // Eigenvalue at the vertex contributes nothing.
  EXPECT_NEAR(stolz_type_of_spectrum(diag({1.0, 0.5})).value, 1.0, 1e-15);
}

TEST(RBound, IdentityFamily) {
  const RBoundEstimate r = rbound_estimate({Operator(identity(3))});
  EXPECT_NEAR(r.value, 1.0, 3.0 * r.stderr_ + 1e-12);
  EXPECT_EQ(r.family_size, 1U);
}

TEST(RBound, HilbertLawTwoIdentities) {
  const RBoundEstimate r = rbound_estimate({Operator(identity(3)), Operator(2.0 * identity(3))});
  EXPECT_NEAR(r.value, 2.0, 3.0 * r.stderr_ + 1e-12);
  EXPECT_LE(r.mc_value, 2.0 + 3.0 * r.stderr_);
}

TEST(RBound, EmptyFamily) {
  try {
    rbound_estimate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_family);
  }
}

TEST(RBound, PowersInL4StableUnderDoubling) {
  const Operator t = generate(ZooSpec::diag_in_stolz(2.0, 6, 3, 4.0));
  const auto fam = power_family(t, 32);
  RBoundOptions o;
  o.trials = 16;
  const double a = rbound_estimate(fam, o).value;
  o.trials = 32;
  const double b = rbound_estimate(fam, o).value;
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_NEAR(a, b, 0.1 * a);
}

TEST(RBound, DominatesUniformBound) {
  const Operator t = generate(ZooSpec::jordan(0.6, 4, 0.5, 3.0));
  const auto fam = dd_family(t, 16);
  const RBoundEstimate r = rbound_estimate(fam);
  double sup = 0.0;
  for (const auto& op : fam) sup = std::max(sup, operator_norm(op));
  EXPECT_GE(r.value, sup - 3.0 * r.stderr_);
}

TEST(RBound, RademacherVersusGaussian) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Operator t = generate(ZooSpec::conjugated(ZooSpec::diag_in_stolz(2.0, 4, s), 5.0, s, 3.0));
    const auto fam = power_family(t, 8);
    RBoundOptions o;
    o.trials = 16;
    o.seed = 100 + s;
    const RBoundEstimate rad = rbound_estimate(fam, o);
    o.sign_kind = SignKind::gaussian;
    const RBoundEstimate gau = rbound_estimate(fam, o);
    EXPECT_LE(rad.value, std::sqrt(kPi / 2.0) * gau.value * (1.0 + 3.0 * gau.stderr_));
  }
}

TEST(RBound, ThreadIndependent) {
  const auto fam = power_family(generate(ZooSpec::jordan(0.5, 3, 0.4, 3.0)), 8);
  RBoundOptions o;
  o.trials = 8;
  o.threads = 1;
  const RBoundEstimate a = rbound_estimate(fam, o);
  o.threads = 3;
  const RBoundEstimate b = rbound_estimate(fam, o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(ErgodicSplit, Diagonal) {
  const ErgodicSplit s = ergodic_split(diag({1.0, 0.5}));
  EXPECT_LE((s.p_ker.matrix() - diag({1.0, 0.0}).matrix()).norm(), 1e-12);
  EXPECT_LE((s.p_ran.matrix() - diag({0.0, 1.0}).matrix()).norm(), 1e-12);
  EXPECT_EQ(s.kernel_dim, 1);
  EXPECT_NEAR(s.injectivity_gap, 0.5, 1e-12);
}

TEST(ErgodicSplit, NoEigenvalueAtOne) {
  const ErgodicSplit s = ergodic_split(diag({0.2, -0.5}));
  EXPECT_EQ(s.p_ker.matrix().norm(), 0.0);
  EXPECT_LE((s.p_ran.matrix() - identity(2)).norm(), 0.0);
}

TEST(ErgodicSplit, SimilarityTransport) {
  CounterRng rng(42, 0);
  Matrix v(2, 2);
  v << 1.0, 0.4, -0.3, 1.2;
  const Matrix vinv = v.inverse();
  const Matrix t = v * diag({1.0, 0.3}).matrix() * vinv;
  const ErgodicSplit s = ergodic_split(Operator(t));
  const Matrix pk = v * diag({1.0, 0.0}).matrix() * vinv;
  EXPECT_LE((s.p_ker.matrix() - pk).norm(), 1e-7);
  EXPECT_LE((s.p_ker.matrix() + s.p_ran.matrix() - identity(2)).norm(), 1e-8);
  EXPECT_LE((t * s.p_ker.matrix() - s.p_ker.matrix()).norm(), 1e-8);
  EXPECT_GT(s.injectivity_gap, 1e-8);
}

TEST(ErgodicSplit, DefectiveThrows) {
  Matrix j(2, 2);
  j << 1.0, 1.0, 0.0, 1.0;
  try {
    ergodic_split(Operator(j));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::non_semisimple);
  }
}

TEST(Classification, Zoo) {
  for (std::uint64_t seed : {1ULL, 7ULL, 9ULL}) {
    const Operator t = generate(ZooSpec::diag_in_stolz(2.0, 16, seed));
    const DdBound dd = dd_bound(t);
    EXPECT_LE(dd.trend, 0.05);
    EXPECT_EQ(classify(power_bound(t, 200), dd), Classification::ritt_likely);
  }
  const Operator rot = generate(ZooSpec::rotation(kPi / 2));
  EXPECT_EQ(classify(power_bound(rot, 200), dd_bound(rot)), Classification::power_bounded_not_ritt);
  const Operator tan = generate(ZooSpec::tangential_average(32));
  const PowerBound pb = power_bound(tan, 200);
  EXPECT_LE(pb.value, 1.0 + 1e-12);
  EXPECT_FALSE(pb.growing);
  EXPECT_GT(dd_bound(tan).trend, 0.4);
  EXPECT_EQ(classify(power_bound(diag({1.2}), 200), dd_bound(diag({1.2}))), Classification::not_power_bounded);
}

TEST(Diagnose, JsonReport) {
  DiagnosticsOptions o;
  o.with_rbound = true;
  o.rbound.trials = 4;
  const DiagnosticsReport r = diagnose(generate(ZooSpec::rotation(kPi / 2)), o);
  const Json j = diagnostics_to_json(r);
  EXPECT_EQ(j["classification"], "PowerBoundedNotRitt");
  EXPECT_EQ(j["schema"], kSchemaVersion);
  EXPECT_TRUE(j["stolz_type_spec"]["infinite"].get<bool>());
  EXPECT_TRUE(j["stolz_type_spec"]["value"].is_null());
  EXPECT_EQ(parse_json(j.dump(), "report"), j);
}
