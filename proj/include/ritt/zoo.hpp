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

// Named operator families used by the tests and experiments.

#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "ritt/io.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/rng.hpp"
#include "ritt/stolz.hpp"

namespace ritt {

struct ZooSpec {
  enum class Kind { diag_in_stolz, jordan, rotation, tangential_average, conjugated };

  Kind kind = Kind::diag_in_stolz;
  double omega = 2.0;
  int n = 2;
  std::uint64_t seed = 0;
  cplx lambda = 0.5;
  double delta = 0.0;
  double phi = 0.0;
  double cond = 1.0;
  std::shared_ptr<const ZooSpec> base;
  double p = 2.0;

  static ZooSpec diag_in_stolz(double omega, int n, std::uint64_t seed, double p = 2.0) {
    ZooSpec s;
    s.kind = Kind::diag_in_stolz;
    s.omega = omega;
    s.n = n;
    s.seed = seed;
    s.p = p;
    return s;
  }
  static ZooSpec jordan(cplx lambda, int n, double delta, double p = 2.0) {
    ZooSpec s;
    s.kind = Kind::jordan;
    s.lambda = lambda;
    s.n = n;
    s.delta = delta;
    s.p = p;
    return s;
  }
  static ZooSpec rotation(double phi, double p = 2.0) {
    ZooSpec s;
    s.kind = Kind::rotation;
    s.phi = phi;
    s.n = 2;
    s.p = p;
    return s;
  }
  static ZooSpec tangential_average(int n, double p = 2.0) {
    ZooSpec s;
    s.kind = Kind::tangential_average;
    s.n = n;
    s.p = p;
    return s;
  }
  /// V base V^{-1} with cond(V) = cond; `seed` picks the singular vectors.
  static ZooSpec conjugated(const ZooSpec& base, double cond, std::uint64_t seed = 0, double p = 2.0) {
    ZooSpec s;
    s.kind = Kind::conjugated;
    s.base = std::make_shared<const ZooSpec>(base);
    s.cond = cond;
    s.seed = seed;
    s.n = base.n;
    s.p = p;
    return s;
  }

  std::string id() const {
    auto num = [](double v) { return CsvTable::num(v); };
    switch (kind) {
      case Kind::diag_in_stolz:
        return "diag_in_stolz(" + num(omega) + "," + std::to_string(n) + "," + std::to_string(seed) + ")";
      case Kind::jordan:
        return "jordan(" + num(lambda.real()) + (lambda.imag() != 0.0 ? "+" + num(lambda.imag()) + "i" : "") + "," +
               std::to_string(n) + "," + num(delta) + ")";
      case Kind::rotation: return "rotation(" + num(phi) + ")";
      case Kind::tangential_average: return "tangential_average(" + std::to_string(n) + ")";
      case Kind::conjugated: return "conjugated(" + base->id() + "," + num(cond) + "," + std::to_string(seed) + ")";
    }
    return "unknown";
  }
};

/// Haar-like unitary from the QR factorization of a complex Gaussian matrix.
inline Matrix random_unitary(Eigen::Index n, CounterRng& rng) {
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Eigenvalues drawn uniformly from {|z| <= 0.9} intersected with the
/// type-omega domain, by rejection.
inline std::vector<cplx> sample_stolz_points(double omega, int count, std::uint64_t seed, double radius = 0.9) {
  const StolzDomain d(omega);
  CounterRng rng(seed, 0x5701ULL);
  std::vector<cplx> pts;
  long long attempts = 0;
  while (static_cast<int>(pts.size()) < count) {
    require(++attempts < 100000000LL, Errc::bad_parameters, "rejection sampler failed");
    const cplx z(radius * (2.0 * rng.uniform() - 1.0), radius * (2.0 * rng.uniform() - 1.0));
    if (std::abs(z) <= radius && d.contains(z)) pts.push_back(z);
  }
  return pts;
}

inline Operator generate(const ZooSpec& s) {
  require(s.n >= 1, Errc::bad_parameters, "zoo dimension must be >= 1");
  switch (s.kind) {
    case ZooSpec::Kind::diag_in_stolz: {
      require(s.omega > 1.0, Errc::bad_parameters, "diag_in_stolz needs omega > 1");
      const std::vector<cplx> ev = sample_stolz_points(s.omega, s.n, s.seed);
      Matrix m = Matrix::Zero(s.n, s.n);
      for (int i = 0; i < s.n; ++i) m(i, i) = ev[static_cast<std::size_t>(i)];
      return Operator(m, s.p);
    }
    case ZooSpec::Kind::jordan: {
      require(std::abs(s.lambda) < 1.0, Errc::bad_parameters, "jordan needs |lambda| < 1");
      Matrix m = s.lambda * identity(s.n);
      for (int i = 0; i + 1 < s.n; ++i) m(i, i + 1) = s.delta;
      return Operator(m, s.p);
    }
    case ZooSpec::Kind::rotation: {
      Matrix m(2, 2);
      m << std::cos(s.phi), -std::sin(s.phi), std::sin(s.phi), std::cos(s.phi);
      return Operator(m, s.p);
    }
    case ZooSpec::Kind::tangential_average: {
      Matrix m = 0.5 * identity(s.n);
      for (int i = 0; i < s.n; ++i) m((i + 1) % s.n, i) += 0.5;
      return Operator(m, s.p);
    }
    case ZooSpec::Kind::conjugated: {
      require(s.base != nullptr, Errc::bad_parameters, "conjugated needs a base spec");
      require(s.cond >= 1.0, Errc::bad_parameters, "condition target must be >= 1");
      const Operator b = generate(*s.base);
      const Eigen::Index n = b.dim();
      CounterRng rng(s.seed, 0xc0deULL);
      const Matrix u = random_unitary(n, rng);
      const Matrix w = random_unitary(n, rng);
      Eigen::VectorXd sigma(n);
      for (Eigen::Index i = 0; i < n; ++i)
        sigma(i) = n == 1 ? 1.0 : std::pow(s.cond, -static_cast<double>(i) / static_cast<double>(n - 1));
      const Matrix v = u * sigma.cast<cplx>().asDiagonal() * w.adjoint();
      const Matrix vinv = w * sigma.cwiseInverse().cast<cplx>().asDiagonal() * u.adjoint();
      return Operator(v * b.matrix() * vinv, s.p);
    }
  }
  throw Error(Errc::bad_parameters, "unknown zoo kind");
}

// JSON form: {"kind": "...", <kind parameters>, "p": 2}

inline Json zoo_to_json(const ZooSpec& s) {
  Json j;
  switch (s.kind) {
    case ZooSpec::Kind::diag_in_stolz:
      j = {{"kind", "diag_in_stolz"}, {"omega", s.omega}, {"n", s.n}, {"seed", s.seed}};
      break;
    case ZooSpec::Kind::jordan:
      j = {{"kind", "jordan"}, {"lambda", complex_to_json(s.lambda)}, {"n", s.n}, {"delta", s.delta}};
      break;
    case ZooSpec::Kind::rotation: j = {{"kind", "rotation"}, {"phi", s.phi}}; break;
    case ZooSpec::Kind::tangential_average: j = {{"kind", "tangential_average"}, {"n", s.n}}; break;
    case ZooSpec::Kind::conjugated:
      j = {{"kind", "conjugated"}, {"base", zoo_to_json(*s.base)}, {"cond", s.cond}, {"seed", s.seed}};
      break;
  }
  j["p"] = s.p;
  return j;
}

namespace detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed) {
  require(j.is_object(), Errc::bad_parameters, "expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    require(ok, Errc::bad_parameters, "unknown key '" + it.key() + "'");
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace detail

inline ZooSpec zoo_from_json(const Json& j) {
  try {
    require(j.is_object() && j.contains("kind"), Errc::bad_parameters, "zoo spec needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    const double p = detail::get_or(j, "p", 2.0);
    if (kind == "diag_in_stolz") {
      detail::check_keys(j, {"kind", "omega", "n", "seed", "p"});
      return ZooSpec::diag_in_stolz(j.at("omega").get<double>(), j.at("n").get<int>(),
                                    detail::get_or<std::uint64_t>(j, "seed", 0), p);
    }
    if (kind == "jordan") {
      detail::check_keys(j, {"kind", "lambda", "n", "delta", "p"});
      const Json& l = j.at("lambda");
      const cplx lambda = l.is_array() ? cplx(l.at(0).get<double>(), l.at(1).get<double>()) : cplx(l.get<double>());
      return ZooSpec::jordan(lambda, j.at("n").get<int>(), j.at("delta").get<double>(), p);
    }
    if (kind == "rotation") {
      detail::check_keys(j, {"kind", "phi", "p"});
      return ZooSpec::rotation(j.at("phi").get<double>(), p);
    }
    if (kind == "tangential_average") {
      detail::check_keys(j, {"kind", "n", "p"});
      return ZooSpec::tangential_average(j.at("n").get<int>(), p);
    }
    if (kind == "conjugated") {
      detail::check_keys(j, {"kind", "base", "cond", "seed", "p"});
      return ZooSpec::conjugated(zoo_from_json(j.at("base")), j.at("cond").get<double>(),
                                 detail::get_or<std::uint64_t>(j, "seed", 0), p);
    }
    throw Error(Errc::bad_parameters, "unknown zoo kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(Errc::bad_parameters, std::string("malformed zoo spec: ") + e.what());
  }
}

}  // namespace ritt
