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

#include <cmath>
#include <cstdint>
#include <vector>

namespace kterm {

// Counter-based SplitMix64. output(seed, i) = mix64(seed + (i+1)*GOLDEN), so
// any draw is addressable directly and streams derived from (seed, key) are
// reproducible bit-for-bit across platforms. This is the only randomness
// source in the library; std::random distributions are avoided on purpose
// (their outputs are implementation-defined).
namespace rng_detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace rng_detail

/// Derive an independent stream seed from (seed, key). Used to key per-trial,
/// per-purpose streams: derive(master_seed, trial), derive(trial_seed, 1), ...
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  using namespace rng_detail;
  return mix64(seed ^ mix64(key * kGolden + 0x632BE59BD9B4E019ull));
}

/// Random access into a stream without constructing a generator:
/// draw i of stream `seed`.
inline std::uint64_t u64_at(std::uint64_t seed, std::uint64_t i) {
  using namespace rng_detail;
  return mix64(seed + (i + 1) * kGolden);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return u64_at(seed_, counter_++); }

  Rng split(std::uint64_t key) const { return Rng(derive_seed(seed_, key)); }

  /// Uniform in [0, 1), 53-bit mantissa.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n). n must be positive. Modulo reduction; the
  /// bias is < n/2^64 and irrelevant at our scales, determinism is what counts.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  /// +1 or -1 with equal probability.
  double next_sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

  /// Standard normal via Box-Muller, cosine branch. Consumes exactly two
  /// uniforms per sample; no internal cache, so stream position is predictable.
  double next_gaussian() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// Deterministic partial Fisher-Yates: k distinct values from [0, n),
  /// returned sorted ascending.
  std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t k);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Counter-addressed standard normal: sample i of stream `seed`. Uses draws
/// 2i and 2i+1, matching two sequential next_gaussian() uniforms.
inline double gaussian_at(std::uint64_t seed, std::uint64_t i) {
  const double u1 = (static_cast<double>(u64_at(seed, 2 * i) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(u64_at(seed, 2 * i + 1) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline std::vector<std::int64_t> Rng::sample_without_replacement(std::int64_t n,
                                                                 std::int64_t k) {
  std::vector<std::int64_t> pool(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (std::int64_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace kterm
