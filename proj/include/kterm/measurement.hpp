// Copyright (c) 2026 The kterm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Measurement ensembles Phi and the forward map y = Phi x + e. Realization
/// is a pure function of (kind, dims, seed): regenerating reproduces Phi
/// bit-identically.

#include "kterm/quasinorm.hpp"
#include "kterm/rng.hpp"
#include "kterm/types.hpp"

#include <Eigen/SparseCore>

#include <cstdint>
#include <string>
#include <vector>

namespace kterm {

enum class EnsembleKind { DenseGaussian, CountSketch };

struct MeasurementEnsemble {
  EnsembleKind kind = EnsembleKind::DenseGaussian;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  // CountSketch only: m = rows_r * buckets_b.
  Index rows_r = 0;
  Index buckets_b = 0;

  static MeasurementEnsemble dense_gaussian(Index m, Index n, std::uint64_t seed) {
    MeasurementEnsemble e;
    e.kind = EnsembleKind::DenseGaussian;
    e.m = m;
    e.n = n;
    e.seed = seed;
    e.validate();
    return e;
  }

  static MeasurementEnsemble count_sketch(Index rows_r, Index buckets_b, Index n,
                                          std::uint64_t seed) {
    MeasurementEnsemble e;
    e.kind = EnsembleKind::CountSketch;
    e.rows_r = rows_r;
    e.buckets_b = buckets_b;
    e.m = rows_r * buckets_b;
    e.n = n;
    e.seed = seed;
    e.validate();
    return e;
  }

  void validate() const {
    if (m <= 0 || n <= 0) throw std::invalid_argument("ensemble dims must be positive");
    if (kind == EnsembleKind::CountSketch) {
      if (rows_r <= 0 || buckets_b <= 0)
        throw std::invalid_argument("count_sketch requires rows_r > 0 and buckets_b > 0");
      if (m != rows_r * buckets_b)
        throw std::invalid_argument("count_sketch requires m = rows_r * buckets_b");
    }
  }

  /// Non-fatal oddities (e.g. more measurements than dimensions for the dense
  /// Gaussian kind). Callers decide whether to surface them.
  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (kind == EnsembleKind::DenseGaussian && m > n)
      w.push_back("dense_gaussian with m > n: more measurements than dimensions");
    return w;
  }
};

/// Position and sign of column j's single nonzero within repetition t of a
/// CountSketch. Both the realized matrix and the decoder use this, so the
/// estimate of a coordinate depends only on the buckets it hashes to.
struct SketchCell {
  Index row;
  double sign;
};

inline SketchCell count_sketch_cell(const MeasurementEnsemble& e, Index t, Index j) {
  const std::uint64_t u =
      u64_at(derive_seed(e.seed, 0xC5u), static_cast<std::uint64_t>(t) *
                                                 static_cast<std::uint64_t>(e.n) +
                                             static_cast<std::uint64_t>(j));
  const double sign = (u & 1u) ? 1.0 : -1.0;
  const Index bucket = static_cast<Index>((u >> 1) % static_cast<std::uint64_t>(e.buckets_b));
  return SketchCell{t * e.buckets_b + bucket, sign};
}

/// A realized Phi. Dense Gaussian kinds fill `dense`; CountSketch kinds fill
/// `sparse` (compressed sparse column, exactly rows_r nonzeros per column).
/// Immutable after construction; safe to share across threads.
struct RealizedEnsemble {
  MeasurementEnsemble desc;
  Eigen::MatrixXd dense;
  Eigen::SparseMatrix<double> sparse;

  Index rows() const { return desc.m; }
  Index cols() const { return desc.n; }
  bool is_sparse() const { return desc.kind == EnsembleKind::CountSketch; }

  Vec apply(const Vec& x) const {
    if (x.size() != desc.n)
      throw std::invalid_argument("apply: x has length " + std::to_string(x.size()) +
                                  ", ensemble expects " + std::to_string(desc.n));
    return is_sparse() ? Vec(sparse * x) : Vec(dense * x);
  }

  /// Restricted product Phi_S * b where b lives on support S. Used by the
  /// greedy recoverers to avoid full dense products.
  Vec apply_on_support(const std::vector<Index>& support, const Vec& coeffs) const {
    Vec y = Vec::Zero(desc.m);
    for (std::size_t c = 0; c < support.size(); ++c) {
      const Index j = support[c];
      if (is_sparse())
        for (Eigen::SparseMatrix<double>::InnerIterator it(sparse, j); it; ++it)
          y[it.row()] += it.value() * coeffs[static_cast<Index>(c)];
      else
        y += dense.col(j) * coeffs[static_cast<Index>(c)];
    }
    return y;
  }

  /// Adjoint product Phi^T v.
  Vec apply_adjoint(const Vec& v) const {
    if (v.size() != desc.m) throw std::invalid_argument("apply_adjoint: length mismatch");
    return is_sparse() ? Vec(sparse.transpose() * v) : Vec(dense.transpose() * v);
  }

  /// Dense copy regardless of kind (dual-representation oracle in tests).
  Eigen::MatrixXd to_dense() const {
    return is_sparse() ? Eigen::MatrixXd(sparse) : dense;
  }

  /// Wrap an explicit matrix (tests use this for identity/override cases).
  static RealizedEnsemble from_dense(Eigen::MatrixXd phi, std::uint64_t seed = 0) {
    RealizedEnsemble r;
    r.desc.kind = EnsembleKind::DenseGaussian;
    r.desc.m = phi.rows();
    r.desc.n = phi.cols();
    r.desc.seed = seed;
    r.dense = std::move(phi);
    return r;
  }
};

/// Deterministic realization of Phi from its descriptor.
///   DenseGaussian: entry (i, j) = N(0, 1) draw at counter i*n + j, scaled by
///   1/sqrt(m), so RIP-style behavior shows up at m ~ k log(n/k).
///   CountSketch: one +-1 per (repetition, column) at row t*buckets_b + h_t(j).
inline RealizedEnsemble realize(const MeasurementEnsemble& e) {
  e.validate();
  RealizedEnsemble r;
  r.desc = e;
  if (e.kind == EnsembleKind::DenseGaussian) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(e.m));
    const std::uint64_t stream = derive_seed(e.seed, 0xD6u);
    r.dense.resize(e.m, e.n);
    for (Index i = 0; i < e.m; ++i)
      for (Index j = 0; j < e.n; ++j)
        r.dense(i, j) = scale * gaussian_at(stream, static_cast<std::uint64_t>(i) *
                                                            static_cast<std::uint64_t>(e.n) +
                                                        static_cast<std::uint64_t>(j));
  } else {
    std::vector<Eigen::Triplet<double>> cells;
    cells.reserve(static_cast<std::size_t>(e.rows_r * e.n));
    for (Index t = 0; t < e.rows_r; ++t)
      for (Index j = 0; j < e.n; ++j) {
        const SketchCell c = count_sketch_cell(e, t, j);
        cells.emplace_back(static_cast<int>(c.row), static_cast<int>(j), c.sign);
      }
    r.sparse.resize(e.m, e.n);
    r.sparse.setFromTriplets(cells.begin(), cells.end());
    r.sparse.makeCompressed();
  }
  return r;
}

enum class NoiseKind { None, Gaussian };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  static NoiseSpec none() { return NoiseSpec{}; }
  static NoiseSpec gaussian(double sigma, std::uint64_t seed) {
    return NoiseSpec{NoiseKind::Gaussian, sigma, seed};
  }
};

/// y = Phi x + e, with e drawn per spec (deterministic given its seed).
inline Vec measure(const RealizedEnsemble& phi, const Vec& x,
                   const NoiseSpec& noise = NoiseSpec::none()) {
  check_finite(x, "signal");
  Vec y = phi.apply(x);
  if (noise.kind == NoiseKind::Gaussian && noise.sigma != 0.0) {
    Rng rng(noise.seed);
    for (Index i = 0; i < y.size(); ++i) y[i] += noise.sigma * rng.next_gaussian();
  }
  return y;
}

}  // namespace kterm
