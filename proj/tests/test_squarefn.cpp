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

#include "ritt/squarefn.hpp"
#include "ritt/zoo.hpp"

using namespace ritt;
using namespace std::complex_literals;

namespace {

Operator diag(std::initializer_list<cplx> d, double p = 2.0) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (cplx v : d) m(i, i) = v, ++i;
  return Operator(m, p);
}

double quotient(cplx l) { return std::abs(1.0 - l) / (1.0 - std::norm(l)); }

GammaOptions mc(GammaMethod m, std::uint64_t seed = 3) {
  GammaOptions o;
  o.method = m;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(GammaNorm, ZeroOperator) {
  const GammaNorm g = gamma_norm(SqfSequence(diag({0.0, 0.0}), 1, Vector::Unit(2, 0)));
  EXPECT_NEAR(g.value, 1.0, 1e-15);
  EXPECT_EQ(g.truncation_K, 1);
}

TEST(GammaNorm, HalfClosedForm) {
  const GammaNorm g = gamma_norm(SqfSequence(diag({0.5}), 1, Vector::Ones(1)));
  EXPECT_NEAR(g.value, 2.0 / 3.0, 1e-12);
  EXPECT_LT(g.tail_bound, 0.01 * g.value);
  EXPECT_EQ(g.stderr_, 0.0);
}

TEST(GammaNorm, RotationHasNoDecay) {
  try {
    gamma_norm(SqfSequence(generate(ZooSpec::rotation(std::numbers::pi / 2)), 1, Vector::Unit(2, 0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_decay);
  }
}

TEST(GammaNorm, SequenceUsesRunningProducts) {
  const Operator t = generate(ZooSpec::jordan(0.5, 3, 0.4));
  const SqfSequence seq(t, 2, Vector::Ones(3));
  const Matrix i_minus = identity(3) - t.matrix();
  Matrix pw = i_minus * i_minus;
  for (int k = 1; k < 7; ++k) pw = t.matrix() * pw;
  const Vector direct = std::pow(7.0, 1.5) * pw * Vector::Ones(3);
  EXPECT_LE((seq(7) - direct).norm(), 1e-13 * direct.norm());
}

TEST(GammaNorm, GaussianMatchesExactInHilbertSpace) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Operator t = generate(ZooSpec::diag_in_stolz(2.0, 6, 40 + s));
    CounterRng rng(s, 1);
    const SqfSequence seq(t, 1, random_unit_vector(6, 2.0, rng));
    const GammaNorm exact = gamma_norm(seq);
    const GammaNorm est = gamma_norm(seq, mc(GammaMethod::gaussian_mc, s));
    EXPECT_GT(est.stderr_, 0.0);
    EXPECT_LE(std::abs(est.value - exact.value), 3.0 * est.stderr_) << s;
  }
}

TEST(GammaNorm, ThreadIndependent) {
  const SqfSequence seq(generate(ZooSpec::jordan(0.4, 4, 0.3)), 1, Vector::Ones(4));
  GammaOptions one = mc(GammaMethod::rademacher_mc), many = one;
  many.threads = 4;
  EXPECT_EQ(gamma_norm(seq, one).value, gamma_norm(seq, many).value);
}

TEST(GammaNorm, DualityInequality) {
  CounterRng rng(17, 0);
  const double p = 3.0, q = 1.5;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Vector> x, xd;
    cplx pairing = 0.0;
    for (int k = 0; k < 6; ++k) {
      x.push_back(random_unit_vector(4, p, rng) * rng.uniform());
      xd.push_back(random_unit_vector(4, q, rng) * rng.uniform());
      pairing += xd.back().dot(x.back());
    }
    const GammaNorm a = gamma_norm(x, p, mc(GammaMethod::gaussian_mc, trial));
    const GammaNorm b = gamma_norm(xd, q, mc(GammaMethod::gaussian_mc, 100 + trial));
    const double slack = 3.0 * (a.stderr_ * b.value + b.stderr_ * a.value);
    EXPECT_LE(std::abs(pairing), a.value * b.value + slack);
  }
}

TEST(GammaNorm, ContractionPrinciple) {
  CounterRng rng(23, 0);
  std::vector<Vector> x, y;
  for (int k = 0; k < 8; ++k) {
    x.push_back(random_unit_vector(5, 4.0, rng));
    y.push_back(x.back() * (2.0 * rng.uniform() - 1.0));
  }
  const GammaNorm a = gamma_norm(x, 4.0, mc(GammaMethod::rademacher_mc, 1));
  const GammaNorm b = gamma_norm(y, 4.0, mc(GammaMethod::rademacher_mc, 2));
  EXPECT_LE(b.value, a.value + 3.0 * std::hypot(a.stderr_, b.stderr_));
}

TEST(GammaNorm, ExactNeedsHilbert) {
  EXPECT_THROW(gamma_norm(std::vector<Vector>{Vector::Ones(2)}, 3.0), Error);
}

TEST(PhiNorm, HalfClosedForm) {
  const SqfNorm s = phi_m_norm(diag({0.5}), 1);
  EXPECT_NEAR(s.value, 2.0 / 3.0, 1e-10);
  EXPECT_EQ(s.probes, 0);
}

TEST(PhiNorm, ZeroOperator) {
  for (int m : {1, 2, 3}) EXPECT_NEAR(phi_m_norm(diag({0.0, 0.0, 0.0}), m).value, 1.0, 1e-14);
}

TEST(PhiNorm, DiagonalStolzControl) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Operator t = generate(ZooSpec::diag_in_stolz(2.0, 8, seed));
    double expect = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i) expect = std::max(expect, quotient(t.matrix()(i, i)));
    const double v = phi_m_norm(t, 1).value;
    EXPECT_NEAR(v, expect, 1e-9 * expect);
    EXPECT_LE(v, 2.0);
  }
}

TEST(PhiNorm, JordanMatchesDenseGram) {
  const Operator t = generate(ZooSpec::jordan(0.5, 4, 0.2));
  for (int m : {1, 2}) {
    Matrix pk = identity(4);
    for (int j = 0; j < m; ++j) pk = pk * (identity(4) - t.matrix());
    Matrix g = Matrix::Zero(4, 4);
    for (int k = 1; k <= 2000; ++k) {
      g += std::pow(static_cast<double>(k), 2.0 * m - 1.0) * pk.adjoint() * pk;
      pk = t.matrix() * pk;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    const double dense = std::sqrt(es.eigenvalues().maxCoeff());
    const double v = phi_m_norm(t, m).value;
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v, dense, 0.01 * dense) << m;
  }
}

TEST(PhiNorm, ProbeMaximumIsBelowExact) {
  const Operator t = generate(ZooSpec::jordan(0.5, 4, 0.2));
  const double exact = phi_m_norm(t, 1).value;
  const SqfNorm probed = phi_m_norm(t, 1, 32, mc(GammaMethod::gaussian_mc));
  EXPECT_EQ(probed.probes, 36);
  EXPECT_LE(probed.value, exact + 3.0 * probed.stderr_);
  EXPECT_GE(probed.value, 0.5 * exact);
}

TEST(PhiDualNorm, SelfAdjointEqualsPrimal) {
  const Operator t = diag({0.5, -0.3, 0.1});
  for (int m : {1, 2}) EXPECT_NEAR(phi_m_dual_norm(t, m).value, phi_m_norm(t, m).value, 1e-10);
  EXPECT_NEAR(phi_m_dual_norm(diag({0.0}), 1).value, 1.0, 1e-14);
}

TEST(PhiDualNorm, ScalarOperatorOnL4) {
  // For T = lambda I the sequence is (c_k x) and every gamma norm is
  // (sum |c_k|^2)^{1/2} ||x||_p.
  const cplx l = 0.4 + 0.2i;
  Matrix m = l * identity(3);
  const Operator t(m, 4.0);
  const SqfNorm primal = phi_m_norm(t, 1, 8, mc(GammaMethod::gaussian_mc));
  const SqfNorm dual = phi_m_dual_norm(t, 1, 8, mc(GammaMethod::gaussian_mc));
  EXPECT_NEAR(primal.value, quotient(l), 3.0 * primal.stderr_ + 1e-12);
  EXPECT_NEAR(dual.value, quotient(l), 3.0 * dual.stderr_ + 1e-12);
}

TEST(LowerBound, Examples) {
  EXPECT_NEAR(lower_bound_check(diag({0.5}), 1).value, 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(lower_bound_check(diag({0.5, 0.9}), 1).value, std::min(quotient(0.5), quotient(0.9)), 1e-9);
}

TEST(LowerBound, EigenvalueOneNeedsRestriction) {
  const Operator t = diag({1.0, 0.5});
  const LowerBound whole = lower_bound_check(t, 1);
  EXPECT_TRUE(whole.zero);
  const LowerBound range = lower_bound_check(t, 1, 16, {}, true);
  EXPECT_TRUE(range.restricted);
  EXPECT_FALSE(range.zero);
  EXPECT_NEAR(range.value, 2.0 / 3.0, 1e-9);
}

TEST(SqfSequence, Csv) {
  const std::string csv = sqf_sequence_csv(SqfSequence(diag({0.5}), 1, Vector::Ones(1)), 3);
  EXPECT_EQ(csv.substr(0, 8), "k,norm\r\n");
  EXPECT_NE(csv.find("3,"), std::string::npos);
}
