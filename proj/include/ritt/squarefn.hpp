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
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ritt/diagnostics.hpp"
#include "ritt/io.hpp"
#include "ritt/numkernel.hpp"
#include "ritt/parallel.hpp"
#include "ritt/rng.hpp"
#include "ritt/series.hpp"

namespace ritt {

enum class GammaMethod { hilbert_exact, gaussian_mc, rademacher_mc };

inline std::string gamma_method_name(GammaMethod m) {
  switch (m) {
    case GammaMethod::hilbert_exact: return "hilbert_exact";
    case GammaMethod::gaussian_mc: return "gaussian_mc";
    case GammaMethod::rademacher_mc: return "rademacher_mc";
  }
  return "hilbert_exact";
}

struct GammaNorm {
  double value = 0.0;
  double stderr_ = 0.0;  ///< 0 for the exact method
  GammaMethod method = GammaMethod::hilbert_exact;
  long long truncation_K = 0;
  double tail_bound = 0.0;
};

struct GammaOptions {
  GammaMethod method = GammaMethod::hilbert_exact;
  int samples = 4096;  ///< split into kBatches batches
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double tail_rel = 1e-13;     ///< exact method: tail / head
  double mc_tail_rel = 1e-6;   ///< sampled methods
  long long max_terms = 1LL << 20;
};

// ---------------------------------------------------------------------------
// Decay certificate

/// Bound ||T^{k-1} (I - T)^m|| <= c q^{k-1} on the range of (I - T)^m, from a
/// checkpoint s with ||D^s|| <= 1/2 where D = T restricted away from the
/// eigenvalue 1: c = 2 max_{i<s} ||D^i|| and q = 2^{-1/s}.
struct DecayModel {
  double q = 0.0;
  double c = 1.0;
  long long checkpoint = 1;
  long long nilpotent = 0;  ///< s with D^s = 0 exactly, 0 if none was seen
  int kernel_dim = 0;

  /// Whether every term with index above K vanishes.
  bool exhausted(long long K) const noexcept { return nilpotent > 0 && K >= nilpotent; }
};

inline constexpr long long kMaxCheckpoint = 1LL << 16;

inline DecayModel decay_model(const Operator& t, int m) {
  const Eigen::Index n = t.dim();
  Matrix d = t.matrix();
  DecayModel out;
  const std::vector<cplx> ev = eigenvalues(t).eigenvalues;
  double rho = 0.0;
  bool near_one = false;
  for (const cplx l : ev) {
    if (std::abs(l - 1.0) <= 1e-8) {
      near_one = true;
    } else {
      rho = std::max(rho, std::abs(l));
    }
  }
  if (near_one) {
    const ErgodicSplit split = ergodic_split(t);
    out.kernel_dim = split.kernel_dim;
    Matrix base = identity(n) - t.matrix();
    Matrix pw = identity(n);
    for (int j = 0; j < m; ++j) pw = pw * base;
    const double leak = spectral_norm(split.p_ker.matrix() * pw);
    require(leak <= 1e-10 * std::max(1.0, spectral_norm(pw)), Errc::no_decay,
            "(I - T)^m does not annihilate the spectral subspace at 1");
    d = t.matrix() * split.p_ran.matrix();
  }
  require(rho < 1.0 - 1e-12, Errc::no_decay, "spectral radius away from 1 is not below 1");
  double max_norm = 1.0;
  Matrix power = identity(n);
  for (long long s = 1; s <= kMaxCheckpoint; ++s) {
    power = power * d;
    const double nrm = matrix_norm_upper(power, t.p());
    require(std::isfinite(nrm), Errc::no_decay, "powers overflow");
    if (nrm <= 0.5) {
      out.checkpoint = s;
      if (nrm == 0.0) out.nilpotent = s;
      out.c = 2.0 * max_norm;
      out.q = std::pow(2.0, -1.0 / static_cast<double>(s));
      return out;
    }
    max_norm = std::max(max_norm, nrm);
  }
  throw Error(Errc::no_decay, "powers do not drop below 1/2 within the checkpoint cap");
}

// ---------------------------------------------------------------------------
// Sequences

/// v_k = k^{m-1/2} T^{k-1} (I - T)^m x, generated by running products.
class SqfSequence {
 public:
  SqfSequence(Operator t, int m, Vector x) : t_(std::move(t)), m_(m), x_(std::move(x)) {
    require(m_ >= 1, Errc::bad_parameters, "m must be at least 1");
    require(x_.size() == t_.dim(), Errc::bad_parameters, "vector dimension mismatch");
    Vector y = x_;
    for (int j = 0; j < m_; ++j) y = y - t_.matrix() * y;
    head_ = y;
  }

  const Operator& source() const noexcept { return t_; }
  int m() const noexcept { return m_; }
  const Vector& x() const noexcept { return x_; }
  /// (I - T)^m x
  const Vector& base() const noexcept { return head_; }

  Vector operator()(long long k) const {
    require(k >= 1, Errc::bad_parameters, "sequence index starts at 1");
    while (static_cast<long long>(powers_.size()) < k) {
      powers_.push_back(powers_.empty() ? head_ : Vector(t_.matrix() * powers_.back()));
    }
    return std::pow(static_cast<double>(k), m_ - 0.5) * powers_[static_cast<std::size_t>(k - 1)];
  }

 private:
  Operator t_;
  int m_;
  Vector x_;
  Vector head_;
  mutable std::vector<Vector> powers_;
};

// ---------------------------------------------------------------------------
// Gamma norms of finite lists

namespace detail {

/// Batch-mean estimate of sqrt(E ||sum eps_k v_k||^2).
template <class Draw>
GammaNorm mc_gamma(const GammaOptions& opts, Draw&& draw) {
  require(opts.samples >= kBatches, Errc::bad_parameters, "need at least one sample per batch");
  const int per_batch = opts.samples / kBatches;
  std::vector<double> means(kBatches, 0.0);
  parallel_for(kBatches, opts.threads, [&](std::size_t b) {
    CounterRng rng(opts.seed, 0x5f00 + b);
    double acc = 0.0;
    for (int s = 0; s < per_batch; ++s) acc += draw(rng);
    means[b] = acc / per_batch;
  });
  double mean = 0.0;
  for (double v : means) mean += v;
  mean /= kBatches;
  double var = 0.0;
  for (double v : means) var += (v - mean) * (v - mean);
  var /= (kBatches - 1);
  GammaNorm g;
  g.method = opts.method;
  g.value = std::sqrt(mean);
  g.stderr_ = mean > 0.0 ? std::sqrt(var / kBatches) / (2.0 * g.value) : 0.0;
  return g;
}

}  // namespace detail

/// Gamma norm of an explicit finite list in l^p_n.
inline GammaNorm gamma_norm(const std::vector<Vector>& v, double p, const GammaOptions& opts = {}) {
  require(!v.empty(), Errc::empty_family, "empty vector list");
  const Eigen::Index n = v.front().size();
  for (const Vector& x : v) require(x.size() == n, Errc::bad_parameters, "vector dimension mismatch");
  GammaNorm g;
  switch (opts.method) {
    case GammaMethod::hilbert_exact: {
      require(p == 2.0, Errc::bad_parameters, "hilbert_exact needs p = 2");
      g.value = std::sqrt(pairwise_sum<double>(0, v.size(), [&](std::size_t i) { return v[i].squaredNorm(); }));
      break;
    }
    case GammaMethod::gaussian_mc: {
      // sum_k g_k v_k is a real Gaussian vector in R^{2n}; sample it from the
      // square root of its covariance.
      Eigen::MatrixXd u(2 * n, static_cast<Eigen::Index>(v.size()));
      for (std::size_t k = 0; k < v.size(); ++k) {
        u.col(static_cast<Eigen::Index>(k)) << v[k].real(), v[k].imag();
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u * u.transpose());
      const Eigen::MatrixXd root = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
      g = detail::mc_gamma(opts, [&](CounterRng& rng) {
        Eigen::VectorXd z(2 * n);
        for (Eigen::Index i = 0; i < 2 * n; ++i) z(i) = rng.normal();
        const Eigen::VectorXd w = root * z;
        Vector c(n);
        c.real() = w.head(n);
        c.imag() = w.tail(n);
        const double nrm = lp_norm(c, p);
        return nrm * nrm;
      });
      break;
    }
    case GammaMethod::rademacher_mc: {
      g = detail::mc_gamma(opts, [&](CounterRng& rng) {
        Vector c = Vector::Zero(n);
        for (const Vector& x : v) c += rng.rademacher() * x;
        const double nrm = lp_norm(c, p);
        return nrm * nrm;
      });
      break;
    }
  }
  g.method = opts.method;
  g.truncation_K = static_cast<long long>(v.size());
  return g;
}

/// Gamma norm of an infinite square-function sequence, truncated where the
/// certified geometric tail falls below the requested fraction of the head.
inline GammaNorm gamma_norm(const SqfSequence& seq, const DecayModel& model, const GammaOptions& opts = {}) {
  const double p = seq.source().p();
  const double a = seq.m() - 0.5;
  const double scale = model.c * lp_norm(seq.base(), p);
  const bool exact = opts.method == GammaMethod::hilbert_exact;
  const double rel = exact ? opts.tail_rel : opts.mc_tail_rel;
  std::vector<Vector> terms;
  double head_sq = 0.0, head_max = 0.0, tail = 0.0;
  long long k = 0;
  if (scale == 0.0) {
    terms.push_back(seq(1));
  } else {
    for (k = 1; k <= opts.max_terms; ++k) {
      terms.push_back(seq(k));
      const double nrm = lp_norm(terms.back(), p);
      head_sq += nrm * nrm;
      head_max = std::max(head_max, nrm);
      if (model.exhausted(k)) {
        tail = 0.0;
        break;
      }
      if (exact) {
        tail = std::sqrt(power_geometric_tail(k, 2.0 * a, model.q * model.q, scale * scale));
        if (tail <= rel * std::sqrt(head_sq)) break;
      } else {
        tail = power_geometric_tail(k, a, model.q, scale);
        if (tail <= rel * head_max) break;
      }
    }
    require(k <= opts.max_terms, Errc::tail_bound_failure, "truncation budget exhausted");
  }
  GammaNorm g = gamma_norm(terms, p, opts);
  g.tail_bound = tail;
  return g;
}

inline GammaNorm gamma_norm(const SqfSequence& seq, const GammaOptions& opts = {}) {
  return gamma_norm(seq, decay_model(seq.source(), seq.m()), opts);
}

/// (k, ||v_k||_p) rows for k = 1..K.
inline std::string sqf_sequence_csv(const SqfSequence& seq, long long K) {
  CsvTable csv({"k", "norm"});
  for (long long k = 1; k <= K; ++k) {
    csv.add_row({std::to_string(k), CsvTable::num(lp_norm(seq(k), seq.source().p()))});
  }
  return csv.str();
}

// ---------------------------------------------------------------------------
// Operator norms

struct SqfNorm {
  double value = 0.0;
  double stderr_ = 0.0;
  GammaMethod method = GammaMethod::hilbert_exact;
  long long truncation_K = 0;
  double tail_bound = 0.0;
  int probes = 0;  ///< vectors tried; 0 for the Gram computation
};

namespace detail {

/// Truncated Gram sum sum_k M_k^* M_k, M_k = k^{m-1/2} T^{k-1} (I - T)^m, with
/// the certified tail of its norm.
struct GramSum {
  Matrix gram;
  long long K = 0;
  double tail = 0.0;
};

inline GramSum gram_sum(const Operator& t, int m, const DecayModel& model, const GammaOptions& opts) {
  const Eigen::Index n = t.dim();
  Matrix pk = identity(n);
  for (int j = 0; j < m; ++j) pk = pk - t.matrix() * pk;
  const double base = spectral_norm(pk);
  const double scale = model.c * base;
  constexpr long long kChunk = 64;
  std::vector<Matrix> chunks;
  Matrix chunk = Matrix::Zero(n, n);
  double trace = 0.0;
  GramSum out;
  long long k = 1;
  for (; k <= opts.max_terms; ++k) {
    const double w = std::pow(static_cast<double>(k), 2.0 * m - 1.0);
    const Matrix term = w * (pk.adjoint() * pk);
    chunk += term;
    trace += term.trace().real();
    if (k % kChunk == 0) {
      chunks.push_back(chunk);
      chunk.setZero();
    }
    out.tail = scale == 0.0 || model.exhausted(k)
                   ? 0.0
                   : power_geometric_tail(k, 2.0 * m - 1.0, model.q * model.q, scale * scale);
    if (out.tail <= opts.tail_rel * trace / static_cast<double>(n)) break;
    pk = t.matrix() * pk;
  }
  require(k <= opts.max_terms, Errc::tail_bound_failure, "truncation budget exhausted");
  if (k % kChunk != 0) chunks.push_back(chunk);
  out.gram = pairwise_sum<Matrix>(0, chunks.size(), [&](std::size_t i) { return chunks[i]; });
  out.K = k;
  return out;
}

inline SqfNorm probe_extreme(const Operator& t, int m, int probe_count, const GammaOptions& opts,
                             const Matrix* restrict, bool maximize) {
  const DecayModel model = decay_model(t, m);
  const Eigen::Index n = t.dim();
  std::vector<Vector> probes;
  for (Eigen::Index j = 0; j < n; ++j) probes.push_back(Vector::Unit(n, j));
  CounterRng rng(opts.seed, 0x9e00);
  for (int i = 0; i < probe_count; ++i) probes.push_back(random_unit_vector(n, t.p(), rng));
  if (restrict != nullptr) {
    for (Vector& x : probes) {
      x = *restrict * x;
      const double nrm = lp_norm(x, t.p());
      if (nrm > 1e-12) x /= nrm;
    }
  }
  std::vector<GammaNorm> res(probes.size());
  parallel_for(probes.size(), opts.threads, [&](std::size_t i) {
    if (lp_norm(probes[i], t.p()) == 0.0) {
      res[i].value = maximize ? 0.0 : std::numeric_limits<double>::infinity();
      return;
    }
    GammaOptions o = opts;
    o.threads = 1;
    o.seed = derive_key(opts.seed, i);
    res[i] = gamma_norm(SqfSequence(t, m, probes[i]), model, o);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.size(); ++i) {
    if (maximize ? res[i].value > res[best].value : res[i].value < res[best].value) best = i;
  }
  SqfNorm out{res[best].value, res[best].stderr_, opts.method, res[best].truncation_K, res[best].tail_bound,
              static_cast<int>(probes.size())};
  return out;
}

}  // namespace detail

/// ||Phi_m|| = sup over unit x of the gamma norm of (k^{m-1/2} T^{k-1} (I-T)^m x)_k.
/// Exact via the Gram sum for p = 2 and the exact method, a probe maximum
/// (a lower estimate) otherwise.
inline SqfNorm phi_m_norm(const Operator& t, int m, int probe_count = 16, const GammaOptions& opts = {}) {
  require(m >= 1, Errc::bad_parameters, "m must be at least 1");
  if (opts.method != GammaMethod::hilbert_exact) return detail::probe_extreme(t, m, probe_count, opts, nullptr, true);
  require(t.is_hilbert(), Errc::bad_parameters, "hilbert_exact needs p = 2");
  const detail::GramSum g = detail::gram_sum(t, m, decay_model(t, m), opts);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.gram);
  const double lmax = std::max(0.0, es.eigenvalues().maxCoeff());
  SqfNorm out;
  out.value = std::sqrt(lmax);
  out.truncation_K = g.K;
  out.tail_bound = std::sqrt(lmax + g.tail) - out.value;
  return out;
}

/// ||Phi_m^*||: the square function of the adjoint on l^q, q = p / (p - 1).
inline SqfNorm phi_m_dual_norm(const Operator& t, int m, int probe_count = 16, const GammaOptions& opts = {}) {
  return phi_m_norm(t.adjoint(), m, probe_count, opts);
}

struct LowerBound {
  double value = 0.0;
  bool zero = false;        ///< the square function annihilates some unit vector
  bool restricted = false;  ///< computed on the range of I - P_ker
  long long truncation_K = 0;
  double tail_bound = 0.0;
};

inline constexpr double kZeroLowerBound = 1e-8;

/// inf over unit x of the gamma norm of Phi_m x. With restrict_to_range the
/// infimum runs over the complement of ker(I - T) given by the ergodic split.
inline LowerBound lower_bound_check(const Operator& t, int m, int probe_count = 16, const GammaOptions& opts = {},
                                    bool restrict_to_range = false) {
  require(m >= 1, Errc::bad_parameters, "m must be at least 1");
  LowerBound out;
  Matrix range_proj;
  int kernel_dim = 0;
  if (restrict_to_range) {
    const ErgodicSplit split = ergodic_split(t);
    require(split.kernel_dim < t.dim(), Errc::bad_parameters, "T is the identity on its range");
    out.restricted = split.kernel_dim > 0;
    range_proj = split.p_ran.matrix();
    kernel_dim = split.kernel_dim;
  }
  if (opts.method != GammaMethod::hilbert_exact) {
    const SqfNorm r =
        detail::probe_extreme(t, m, probe_count, opts, out.restricted ? &range_proj : nullptr, false);
    out.value = r.value;
    out.truncation_K = r.truncation_K;
    out.tail_bound = r.tail_bound;
  } else {
    require(t.is_hilbert(), Errc::bad_parameters, "hilbert_exact needs p = 2");
    const detail::GramSum g = detail::gram_sum(t, m, decay_model(t, m), opts);
    Matrix gram = g.gram;
    if (out.restricted) {
      Eigen::JacobiSVD<Matrix> svd(range_proj, Eigen::ComputeThinU);
      const Matrix q = svd.matrixU().leftCols(t.dim() - kernel_dim);
      gram = q.adjoint() * g.gram * q;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    const double lmin = std::max(0.0, es.eigenvalues().minCoeff());
    out.value = std::sqrt(lmin);
    out.truncation_K = g.K;
    out.tail_bound = std::sqrt(lmin + g.tail) - out.value;
  }
  out.zero = out.value <= kZeroLowerBound;
  return out;
}

inline Json sqf_norm_to_json(const SqfNorm& s) {
  Json j;
  j["value"] = number_or_null(s.value);
  j["stderr"] = number_or_null(s.stderr_);
  j["method"] = gamma_method_name(s.method);
  j["truncation_K"] = s.truncation_K;
  j["tail_bound"] = number_or_null(s.tail_bound);
  j["probes"] = s.probes;
  return j;
}

}  // namespace ritt
