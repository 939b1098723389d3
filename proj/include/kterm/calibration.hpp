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

/// Empirical calibration of the base scheme's constant C': run trials, record
/// the ratio ||x - R'(y)||_p / (k^(1/p-1/q) ||tail(x, level)||_q), and feed
/// the max into the reduction's predicted constant.

#include "kterm/recovery.hpp"
#include "kterm/rng.hpp"
#include "kterm/signal_model.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace kterm {

struct CalibrationResult {
  std::vector<double> ratios;          // one per ratio trial
  Index exact_trials = 0;              // zero-denominator trials, reclassified
  Index exact_failures = 0;            // ... of those, ones missing 1e-6 relative error
  double max_ratio = 0.0;
  double median_ratio = 0.0;

  /// The calibrated C' (max observed ratio); nullopt when every trial was an
  /// exact-recovery check.
  std::optional<double> cprime() const {
    if (ratios.empty()) return std::nullopt;
    return max_ratio;
  }
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

/// Per-trial seeds are derive_seed(master_seed, trial_offset + i); keep
/// offsets disjoint from any evaluation phase sharing the master seed.
inline CalibrationResult estimate_constant(const BaseRecoverer& rec, const SignalModel& model,
                                           int trials, std::uint64_t master_seed,
                                           std::uint64_t trial_offset = 0) {
  CalibrationResult out;
  const GuaranteeSpec& g = rec.guarantee();
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(master_seed, trial_offset + static_cast<std::uint64_t>(i));
    SignalModel m = model;
    m.seed = derive_seed(trial_seed, 1);
    const GeneratedSignal sig = generate_signal(m);
    const Vec y = measure(rec.ensemble(), sig.x, noise_for(m, derive_seed(trial_seed, 2)));
    const RecoveryResult res = rec.recover(y);
    const double denom = g.error_scale(sig.x);
    if (denom == 0.0) {
      ++out.exact_trials;
      const double xnorm = sig.x.norm();
      if ((sig.x - res.estimate).norm() > 1e-6 * std::max(xnorm, 1e-300)) ++out.exact_failures;
    } else {
      out.ratios.push_back(lp_norm(sig.x - res.estimate, g.outer_p) / denom);
    }
  }
  if (!out.ratios.empty()) {
    out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
    out.median_ratio = median_of(out.ratios);
  }
  return out;
}

}  // namespace kterm
