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

/// Brute-force reference routes used only for verification: exhaustive
/// subset enumeration and full sorting. Deliberately independent of the
/// selection-based implementations they check; only viable at small n.

#include "kterm/quasinorm.hpp"
#include "kterm/types.hpp"

#include <numeric>
#include <vector>

namespace kterm::oracle {

/// Visits every size-k subset of [0, n) in lexicographic order.
template <typename Visitor>
void for_each_subset(Index n, Index k, Visitor&& visit) {
  if (k < 0 || k > n) throw std::out_of_range("subset size out of range");
  std::vector<Index> comb(static_cast<std::size_t>(k));
  std::iota(comb.begin(), comb.end(), Index{0});
  while (true) {
    visit(static_cast<const std::vector<Index>&>(comb));
    if (k == 0) return;
    Index i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// min over all supports S with |S| = k of ||v - v_S||_q, by enumeration.
/// Residuals are built as full-length vectors and fed to the same lp_norm,
/// so agreement with sigma_k is exact, not approximate.
inline double sigma_k_exhaustive(const Vec& v, Index k, Exponent q) {
  double best = std::numeric_limits<double>::infinity();
  for_each_subset(v.size(), k, [&](const std::vector<Index>& s) {
    Vec residual = v;
    for (Index i : s) residual[i] = 0.0;
    best = std::min(best, lp_norm(residual, q));
  });
  return best;
}

/// Top-kappa support via a full stable sort instead of selection.
inline Support top_support_sorted(const Vec& v, Index kappa) {
  if (kappa < 0 || kappa > v.size()) throw std::out_of_range("kappa out of range");
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&v](Index a, Index b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  idx.resize(static_cast<std::size_t>(kappa));
  std::sort(idx.begin(), idx.end());
  Support s;
  s.indices = std::move(idx);
  return s;
}

}  // namespace kterm::oracle
