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

/// lp quasinorms (0 < p <= inf), best-k-term errors, and linear-time top-k
/// projection. Everything here is a pure function of its inputs and safe to
/// call concurrently.

#include "kterm/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace kterm {

/// ||v||_p = (sum |v_i|^p)^(1/p) for finite p > 0, max |v_i| for p = inf.
/// Not a norm for p < 1, but positive-definite and absolutely homogeneous.
/// Rejects non-finite entries. Naive powering with a max-rescaling fallback
/// when the power sum under- or overflows.
inline double lp_norm(const Vec& v, Exponent p) {
  const Index n = v.size();
  if (p.is_inf()) {
    double m = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(v[i]))
        throw std::invalid_argument("lp_norm: non-finite entry at index " + std::to_string(i));
      m = std::max(m, std::abs(v[i]));
    }
    return m;
  }
  const double pe = p.value();
  double sum = 0.0, maxabs = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(v[i]))
      throw std::invalid_argument("lp_norm: non-finite entry at index " + std::to_string(i));
    const double a = std::abs(v[i]);
    maxabs = std::max(maxabs, a);
    if (a > 0.0) sum += std::pow(a, pe);
  }
  if (maxabs == 0.0) return 0.0;
  double result = std::pow(sum, 1.0 / pe);
  if (std::isfinite(sum) && sum > 0.0 && std::isfinite(result) && result > 0.0) return result;
  // Rescale by the largest magnitude; every term of the scaled sum is in (0, 1].
  double scaled = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = std::abs(v[i]) / maxabs;
    if (a > 0.0) scaled += std::pow(a, pe);
  }
  return maxabs * std::pow(scaled, 1.0 / pe);
}

/// Number of nonzero entries.
inline Index l0_count(const Vec& v) {
  Index c = 0;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) ++c;
  return c;
}

/// v_S: keeps entries on S, zero elsewhere.
inline Vec restrict_to(const Vec& v, const Support& s) {
  s.check_bounds(v.size());
  Vec out = Vec::Zero(v.size());
  for (Index i : s.indices) out[i] = v[i];
  return out;
}

namespace detail {

// Indices [0, n) ordered so the first kappa are the top-kappa magnitudes.
// Ties broken by lower index. Expected linear time (introselect); no RNG, so
// identical input gives identical output.
inline std::vector<Index> select_top(const Vec& v, Index kappa) {
  const Index n = v.size();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  auto larger = [&v](Index a, Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  if (kappa > 0 && kappa < n)
    std::nth_element(idx.begin(), idx.begin() + kappa, idx.end(), larger);
  return idx;
}

inline void check_kappa(Index kappa, Index n) {
  if (kappa < 0 || kappa > n)
    throw std::out_of_range("kappa = " + std::to_string(kappa) +
                            " out of range for length " + std::to_string(n));
}

}  // namespace detail

/// Indices of the kappa largest-magnitude entries, ties broken by lower
/// index first. Expected O(n) via selection.
inline Support top_support(const Vec& v, Index kappa) {
  detail::check_kappa(kappa, v.size());
  check_finite(v);
  auto idx = detail::select_top(v, kappa);
  idx.resize(static_cast<std::size_t>(kappa));
  std::sort(idx.begin(), idx.end());
  Support s;
  s.indices = std::move(idx);
  return s;
}

/// Top-kappa selection over an explicit sparse entry list, O(|entries|).
/// Same tie-break as top_support. Entries must have distinct indices.
inline Support top_support_of_entries(std::vector<std::pair<Index, double>> entries,
                                      Index kappa) {
  const auto n = static_cast<Index>(entries.size());
  if (kappa < 0) throw std::out_of_range("kappa must be nonnegative");
  kappa = std::min(kappa, n);
  auto larger = [](const std::pair<Index, double>& a, const std::pair<Index, double>& b) {
    const double ma = std::abs(a.second), mb = std::abs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  };
  if (kappa > 0 && kappa < n)
    std::nth_element(entries.begin(), entries.begin() + kappa, entries.end(), larger);
  std::vector<Index> idx(static_cast<std::size_t>(kappa));
  for (Index i = 0; i < kappa; ++i) idx[static_cast<std::size_t>(i)] = entries[static_cast<std::size_t>(i)].first;
  std::sort(idx.begin(), idx.end());
  Support s;
  s.indices = std::move(idx);
  return s;
}

/// v restricted to its top-kappa magnitudes; exactly min(kappa, ||v||_0)
/// nonzeros.
inline Vec head(const Vec& v, Index kappa) { return restrict_to(v, top_support(v, kappa)); }

/// v minus its top-kappa projection, i.e. v with the head support zeroed.
/// ||tail(v, kappa)||_q equals the best kappa-term approximation error for
/// every q > 0.
inline Vec tail(const Vec& v, Index kappa) {
  const Support s = top_support(v, kappa);
  Vec out = v;
  for (Index i : s.indices) out[i] = 0.0;
  return out;
}

/// Best k-term approximation error sigma_k(v)_q = inf over k-sparse z of
/// ||v - z||_q. The lq quasinorm is separable, so keeping the k largest
/// magnitudes attains the infimum and this equals lp_norm(tail(v, k), q).
inline double sigma_k(const Vec& v, Index k, Exponent q) { return lp_norm(tail(v, k), q); }

/// Result of a numeric inequality check: lhs <= rhs up to relative slack.
struct IneqCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  /// rhs - lhs; negative means the inequality is violated before slack.
  double slack() const { return rhs - lhs; }
};

inline IneqCheck make_check(double lhs, double rhs, double tol = kDefaultTol) {
  return IneqCheck{lhs, rhs, leq_with_slack(lhs, rhs, tol)};
}

/// ||v||_b <= ||v||_a for 0 < a <= b.
inline IneqCheck check_norm_monotone(const Vec& v, Exponent a, Exponent b,
                                     double tol = kDefaultTol) {
  if (!(a <= b)) throw std::invalid_argument("check_norm_monotone requires a <= b");
  return make_check(lp_norm(v, b), lp_norm(v, a), tol);
}

/// ||v||_a <= kappa^(1/a - 1/b) ||v||_b for 0 < a <= b and kappa = ||v||_0.
inline IneqCheck check_sparse_holder(const Vec& v, Exponent a, Exponent b,
                                     double tol = kDefaultTol) {
  if (!(a <= b)) throw std::invalid_argument("check_sparse_holder requires a <= b");
  const auto kappa = static_cast<double>(l0_count(v));
  const double factor = std::pow(kappa, a.inv() - b.inv());
  return make_check(lp_norm(v, a), factor * lp_norm(v, b), tol);
}

/// The dimension version: ||v||_a <= n^(1/a - 1/b) ||v||_b.
inline IneqCheck check_dim_holder(const Vec& v, Exponent a, Exponent b,
                                  double tol = kDefaultTol) {
  if (!(a <= b)) throw std::invalid_argument("check_dim_holder requires a <= b");
  const double factor = std::pow(static_cast<double>(v.size()), a.inv() - b.inv());
  return make_check(lp_norm(v, a), factor * lp_norm(v, b), tol);
}

/// ||u + v||_r^r <= ||u||_r^r + ||v||_r^r for 0 < r <= 1 (the quasinorm
/// triangle inequality; d(f,g) = ||f-g||_r^r is a metric).
inline IneqCheck check_quasi_triangle(const Vec& u, const Vec& v, Exponent r,
                                      double tol = kDefaultTol) {
  if (r.is_inf() || r.value() > 1.0)
    throw std::invalid_argument("check_quasi_triangle requires 0 < r <= 1");
  if (u.size() != v.size()) throw std::invalid_argument("size mismatch");
  const double re = r.value();
  const double lhs = std::pow(lp_norm(u + v, r), re);
  const double rhs = std::pow(lp_norm(u, r), re) + std::pow(lp_norm(v, r), re);
  return make_check(lhs, rhs, tol);
}

/// The blocks B_0, B_1, ... of the shelling decomposition: coordinates sorted
/// by decreasing magnitude (ties by lower index) and grouped kappa at a time.
/// The last block may be shorter. B_0 is the head support; the tail past
/// level j*kappa is the union of blocks j, j+1, ...
inline std::vector<Support> sorted_blocks(const Vec& v, Index kappa) {
  if (kappa <= 0) throw std::invalid_argument("sorted_blocks requires kappa >= 1");
  check_finite(v);
  const Index n = v.size();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::sort(idx.begin(), idx.end(), [&v](Index a, Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  std::vector<Support> blocks;
  for (Index start = 0; start < n; start += kappa) {
    const Index stop = std::min(n, start + kappa);
    std::vector<Index> block(idx.begin() + start, idx.begin() + stop);
    std::sort(block.begin(), block.end());
    Support s;
    s.indices = std::move(block);
    blocks.push_back(std::move(s));
  }
  return blocks;
}

/// Shelling bound: ||tail(v, 2*kappa)||_b <= kappa^(1/b - 1/a) ||tail(v, kappa)||_a
/// for 0 < a <= b and 2*kappa <= n.
inline IneqCheck shelling_bound(const Vec& v, Index kappa, Exponent a, Exponent b,
                                double tol = kDefaultTol) {
  if (!(a <= b)) throw std::invalid_argument("shelling_bound requires a <= b");
  if (kappa < 0 || 2 * kappa > v.size())
    throw std::out_of_range("shelling_bound requires 0 <= 2*kappa <= n");
  const double lhs = lp_norm(tail(v, 2 * kappa), b);
  const double factor = std::pow(static_cast<double>(kappa), b.inv() - a.inv());
  const double rhs = factor * lp_norm(tail(v, kappa), a);
  return make_check(lhs, rhs, tol);
}

/// The per-block step behind the shelling bound: for every i in B_j (j >= 1),
/// |v_i| <= ||v_{B_{j-1}}||_a / kappa^(1/a). Returns the worst (smallest
/// slack) check across all blocks and coordinates.
inline IneqCheck check_block_step(const Vec& v, Index kappa, Exponent a,
                                  double tol = kDefaultTol) {
  const auto blocks = sorted_blocks(v, kappa);
  IneqCheck worst{0.0, std::numeric_limits<double>::infinity(), true};
  for (std::size_t j = 1; j < blocks.size(); ++j) {
    const double prev = lp_norm(restrict_to(v, blocks[j - 1]), a) /
                        std::pow(static_cast<double>(kappa), a.inv());
    for (Index i : blocks[j].indices) {
      const IneqCheck c = make_check(std::abs(v[i]), prev, tol);
      if (c.slack() < worst.slack()) worst = c;
      if (!c.holds) return c;
    }
  }
  return worst;
}

}  // namespace kterm
