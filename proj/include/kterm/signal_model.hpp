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

/// Approximately-sparse test signals x = f + e' with a planted k-sparse head
/// f and a controlled tail e'.

#include "kterm/measurement.hpp"
#include "kterm/quasinorm.hpp"
#include "kterm/rng.hpp"

#include <cstdint>

namespace kterm {

enum class TailKind { None, Gaussian, PowerLaw };

struct SignalModel {
  Index n = 0;
  Index k = 0;                 // exact sparsity of the planted head
  double amp_lo = 1.0;         // head amplitude range (magnitudes)
  double amp_hi = 2.0;
  TailKind tail = TailKind::None;
  double tail_sigma = 0.0;     // Gaussian tail
  double tail_exponent = 1.0;  // PowerLaw tail: j-th largest magnitude is j^-alpha
  NoiseKind noise = NoiseKind::None;  // measurement noise, applied by measure()
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n <= 0) throw std::invalid_argument("signal model requires n > 0");
    if (k < 0 || k > n) throw std::invalid_argument("signal model requires 0 <= k <= n");
    if (amp_lo < 0 || amp_hi < amp_lo)
      throw std::invalid_argument("signal model requires 0 <= amp_lo <= amp_hi");
  }
};

struct GroundTruth {
  Vec head_part;   // f, exactly k-sparse
  Vec tail_part;   // e'
  Support support; // planted support of f
  double sigma_k_half = 0.0;  // sigma_k(x)_q for q in {1/2, 1, 2}
  double sigma_k_one = 0.0;
  double sigma_k_two = 0.0;
};

struct GeneratedSignal {
  Vec x;
  GroundTruth truth;
};

/// Draws x = f + e' from the model. Support chosen uniformly; head magnitudes
/// uniform in [amp_lo, amp_hi] with random signs. Deterministic in model.seed.
inline GeneratedSignal generate_signal(const SignalModel& model) {
  model.validate();
  Rng rng(model.seed);
  Rng support_rng = rng.split(1);
  Rng amp_rng = rng.split(2);
  Rng tail_rng = rng.split(3);

  GeneratedSignal out;
  out.truth.head_part = Vec::Zero(model.n);
  out.truth.tail_part = Vec::Zero(model.n);

  const auto planted = support_rng.sample_without_replacement(model.n, model.k);
  out.truth.support = Support(std::vector<Index>(planted.begin(), planted.end()));
  for (Index i : out.truth.support.indices)
    out.truth.head_part[i] = amp_rng.next_sign() * amp_rng.next_uniform(model.amp_lo, model.amp_hi);

  if (model.tail != TailKind::None && model.k < model.n) {
    std::vector<Index> off;
    off.reserve(static_cast<std::size_t>(model.n - model.k));
    for (Index i = 0; i < model.n; ++i)
      if (!out.truth.support.contains(i)) off.push_back(i);
    if (model.tail == TailKind::Gaussian) {
      for (Index i : off) out.truth.tail_part[i] = model.tail_sigma * tail_rng.next_gaussian();
    } else {
      // j-th largest tail magnitude = j^-alpha, scattered uniformly over the
      // off-support coordinates with random signs.
      const auto m = static_cast<Index>(off.size());
      for (Index j = m - 1; j > 0; --j) {
        const auto swap_with =
            static_cast<Index>(tail_rng.next_below(static_cast<std::uint64_t>(j) + 1));
        std::swap(off[static_cast<std::size_t>(j)], off[static_cast<std::size_t>(swap_with)]);
      }
      for (Index j = 0; j < m; ++j)
        out.truth.tail_part[off[static_cast<std::size_t>(j)]] =
            tail_rng.next_sign() *
            std::pow(static_cast<double>(j + 1), -model.tail_exponent);
    }
  }

  out.x = out.truth.head_part + out.truth.tail_part;
  out.truth.sigma_k_half = sigma_k(out.x, model.k, Exponent(0.5));
  out.truth.sigma_k_one = sigma_k(out.x, model.k, Exponent(1.0));
  out.truth.sigma_k_two = sigma_k(out.x, model.k, Exponent(2.0));
  return out;
}

/// Measurement-noise spec for a signal drawn from this model, keyed off a
/// trial seed so noise and signal streams never overlap.
inline NoiseSpec noise_for(const SignalModel& model, std::uint64_t noise_seed) {
  if (model.noise == NoiseKind::None || model.noise_sigma == 0.0) return NoiseSpec::none();
  return NoiseSpec::gaussian(model.noise_sigma, noise_seed);
}

}  // namespace kterm
