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

TEST(Zoo, Rotation) {
  const Operator r = generate(ZooSpec::rotation(std::numbers::pi / 2));
  Matrix expected(2, 2);
  expected << 0.0, -1.0, 1.0, 0.0;
  EXPECT_LE((r.matrix() - expected).norm(), 1e-15);
}

TEST(Zoo, DiagInStolzMembership) {
  const Operator t = generate(ZooSpec::diag_in_stolz(2.0, 16, 7));
  const StolzDomain d(2.0);
  for (const cplx l : eigenvalues(t).eigenvalues) {
    EXPECT_TRUE(d.contains(l));
    EXPECT_LE(std::abs(l), 0.9);
  }
  EXPECT_EQ(generate(ZooSpec::diag_in_stolz(2.0, 16, 7)), t);
  EXPECT_FALSE(generate(ZooSpec::diag_in_stolz(2.0, 16, 8)) == t);
}

TEST(Zoo, Jordan) {
  const Operator j = generate(ZooSpec::jordan(0.5, 3, 0.1));
  EXPECT_EQ(j.matrix()(0, 0), cplx(0.5));
  EXPECT_EQ(j.matrix()(0, 1), cplx(0.1));
  EXPECT_EQ(j.matrix()(0, 2), cplx(0.0));
  EXPECT_THROW(generate(ZooSpec::jordan(1.0, 3, 0.1)), Error);
}

TEST(Zoo, TangentialAverageSpectrum) {
  const Operator t = generate(ZooSpec::tangential_average(8));
  for (const cplx l : eigenvalues(t).eigenvalues) {
    // (1 + e^{i theta}) / 2 lies on the circle |z - 1/2| = 1/2.
    EXPECT_NEAR(std::abs(l - 0.5), 0.5, 1e-12);
  }
  EXPECT_NEAR(operator_norm(t), 1.0, 1e-12);
  EXPECT_LE(operator_norm(generate(ZooSpec::tangential_average(8, 3.0))), 1.0 + 1e-9);
}

TEST(Zoo, TangentialStolzTypeIsCotangentOfSmallestAngle) {
  // The eigenvalue at theta = 2 pi / n has quotient cot(pi / (2n)).
  for (int n : {8, 32}) {
    const StolzType st = stolz_type_of_spectrum(generate(ZooSpec::tangential_average(n)));
    EXPECT_FALSE(st.infinite);
    EXPECT_NEAR(st.value, 1.0 / std::tan(std::numbers::pi / (2.0 * n)), 1e-6 * st.value);
  }
}

TEST(Zoo, ConjugatedPreservesEigenvalues) {
  const ZooSpec base = ZooSpec::diag_in_stolz(2.0, 8, 3);
  const Operator b = generate(base);
  const Operator c = generate(ZooSpec::conjugated(base, 10.0, 5));
  const Matrix v = c.matrix();
  std::vector<cplx> eb = eigenvalues(b).eigenvalues;
  std::vector<cplx> ec = eigenvalues(c).eigenvalues;
  for (cplx z : eb) {
    double best = 1e300;
    for (cplx w : ec) best = std::min(best, std::abs(z - w));
    EXPECT_LE(best, 1e-7);
  }
}

TEST(Zoo, JsonRoundTrip) {
  const ZooSpec s = ZooSpec::conjugated(ZooSpec::jordan(cplx(0.5, 0.1), 4, 0.2), 10.0, 3, 3.0);
  const Json j = zoo_to_json(s);
  const ZooSpec back = zoo_from_json(parse_json(j.dump(), "zoo"));
  EXPECT_EQ(zoo_to_json(back), j);
  EXPECT_EQ(generate(back), generate(s));
  Json bad = j;
  bad["colour"] = "red";
  EXPECT_THROW(zoo_from_json(bad), Error);
  EXPECT_THROW(zoo_from_json(Json{{"kind", "mystery"}}), Error);
}
