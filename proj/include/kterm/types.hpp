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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace kterm {

using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default relative tolerance for inequality checks. Exact inequalities can
/// only be violated by rounding, so slack is scaled by max(|lhs|, |rhs|, 1).
inline constexpr double kDefaultTol = 1e-9;

inline bool leq_with_slack(double lhs, double rhs, double tol = kDefaultTol) {
  return lhs <= rhs + tol * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

inline bool eq_with_slack(double lhs, double rhs, double tol = kDefaultTol) {
  return std::abs(lhs - rhs) <= tol * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

/// A quasinorm exponent: a real in (0, inf) or infinity itself.
/// All of p, q, r, s, a, b live here; ordering constraints (p >= r >= s > 0,
/// q >= s, a <= b) are validated at call sites.
class Exponent {
 public:
  Exponent(double value) : value_(value) {  // NOLINT: implicit by design
    if (std::isnan(value) || value <= 0.0)
      throw std::invalid_argument("Exponent must be > 0 (or infinity), got " +
                                  std::to_string(value));
  }

  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  double value() const { return value_; }
  bool is_inf() const { return std::isinf(value_); }

  /// 1/p with the convention 1/inf = 0.
  double inv() const { return is_inf() ? 0.0 : 1.0 / value_; }

  friend bool operator==(Exponent a, Exponent b) { return a.value_ == b.value_; }
  friend bool operator!=(Exponent a, Exponent b) { return !(a == b); }
  // a <= b iff 1/a >= 1/b; well-defined with infinity on either side.
  friend bool operator<=(Exponent a, Exponent b) { return a.inv() >= b.inv(); }
  friend bool operator>=(Exponent a, Exponent b) { return b <= a; }
  friend bool operator<(Exponent a, Exponent b) { return a <= b && a != b; }
  friend bool operator>(Exponent a, Exponent b) { return b < a; }

 private:
  double value_;
};

/// A set of coordinate indices: strictly increasing, all in [0, n) for the
/// vector it is used against (checked on use, since n is not stored).
struct Support {
  std::vector<Index> indices;

  Support() = default;
  explicit Support(std::vector<Index> idx) : indices(std::move(idx)) {
    for (std::size_t i = 0; i + 1 < indices.size(); ++i)
      if (indices[i] >= indices[i + 1])
        throw std::invalid_argument("Support indices must be strictly increasing");
    if (!indices.empty() && indices.front() < 0)
      throw std::invalid_argument("Support indices must be nonnegative");
  }

  Index size() const { return static_cast<Index>(indices.size()); }
  bool contains(Index i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
  }
  void check_bounds(Index n) const {
    if (!indices.empty() && indices.back() >= n)
      throw std::out_of_range("Support index " + std::to_string(indices.back()) +
                              " out of range for length " + std::to_string(n));
  }
};

inline void check_finite(const Vec& v, const char* what = "vector") {
  for (Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string(what) + " has non-finite entry at index " +
                                  std::to_string(i));
}

/// Thrown when an iterative recoverer detects divergence.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kterm
