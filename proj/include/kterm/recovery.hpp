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

#include "kterm/guarantee.hpp"
#include "kterm/measurement.hpp"
#include "kterm/types.hpp"

#include <string>
#include <vector>

namespace kterm {

struct RecoveryResult {
  Vec estimate;                // length n
  std::vector<Index> support;  // sorted nonzero support of estimate
  int iterations = 0;
  bool converged = true;
  bool regularized = false;    // a least-squares subproblem needed regularization
  std::string diagnostic;

  static RecoveryResult zero(Index n) {
    RecoveryResult r;
    r.estimate = Vec::Zero(n);
    return r;
  }
};

inline std::vector<Index> nonzero_support(const Vec& v) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

/// A recovery procedure R' with a declared guarantee it is believed to
/// satisfy. Immutable after construction; recover() is reentrant.
class BaseRecoverer {
 public:
  virtual ~BaseRecoverer() = default;

  virtual RecoveryResult recover(const Vec& y) const = 0;
  virtual const GuaranteeSpec& guarantee() const = 0;
  virtual const RealizedEnsemble& ensemble() const = 0;
  /// Declared bound on the output support size S.
  virtual Index output_sparsity() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace kterm
