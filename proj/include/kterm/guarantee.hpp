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

#include "kterm/quasinorm.hpp"
#include "kterm/types.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace kterm {

enum class GuaranteeMode { Uniform, Nonuniform };
enum class TailLevel { K, TwoK };

/// Names one lp/lq recovery guarantee:
///   ||x - R(y)||_p <= C * k^(1/p - 1/q) * ||tail(x, level)||_q
/// where level is k or 2k. `constant` is nullopt while C is uncalibrated.
struct GuaranteeSpec {
  Exponent outer_p{2.0};
  Exponent inner_q{1.0};
  Index k = 0;
  std::optional<double> constant;
  TailLevel tail_level = TailLevel::TwoK;
  GuaranteeMode mode = GuaranteeMode::Uniform;
  double delta = 0.0;  // failure probability for Nonuniform

  Index tail_count() const { return tail_level == TailLevel::K ? k : 2 * k; }

  /// k^(1/p - 1/q) * ||tail(x, tail_count)||_q — the guarantee's right-hand
  /// side without the constant.
  double error_scale(const Vec& x) const {
    const double factor =
        std::pow(static_cast<double>(k), outer_p.inv() - inner_q.inv());
    return factor * lp_norm(tail(x, tail_count()), inner_q);
  }

  std::string describe() const {
    auto ex = [](Exponent e) {
      return e.is_inf() ? std::string("inf") : std::to_string(e.value());
    };
    std::string s = "l_" + ex(outer_p) + "/l_" + ex(inner_q) + " at k=" + std::to_string(k) +
                    ", tail " + (tail_level == TailLevel::K ? "k" : "2k");
    s += mode == GuaranteeMode::Uniform ? ", uniform" : (", nonuniform(delta=" + std::to_string(delta) + ")");
    return s;
  }
};

}  // namespace kterm
