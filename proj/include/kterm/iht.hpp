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

/// Iterative hard thresholding with a fixed step:
///   x <- head(x + step * Phi^T (y - Phi x), k).
/// Output is exactly k-sparse (fewer nonzeros only if the iterate has them).

#include "kterm/quasinorm.hpp"
#include "kterm/recovery.hpp"

#include <memory>

namespace kterm {

struct IhtOptions {
  double step = 0.65;
  int max_iters = 100;
  double tol_rel = 1e-7;
};

inline RecoveryResult iht_recover(const RealizedEnsemble& phi, const Vec& y, Index k,
                                  const IhtOptions& opts = {}) {
  const Index n = phi.cols();
  if (y.size() != phi.rows()) throw std::invalid_argument("iht: dimension mismatch");
  if (k < 0) throw std::invalid_argument("iht: k must be nonnegative");
  if (k == 0 || y.norm() == 0.0) return RecoveryResult::zero(n);

  RecoveryResult out = RecoveryResult::zero(n);
  const double ynorm = y.norm();
  const double tol = opts.tol_rel * ynorm;

  Vec best = out.estimate;
  double prev_res = ynorm, best_res = ynorm;
  int doubling_streak = 0, stagnant = 0;

  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    const Vec residual = y - phi.apply(out.estimate);
    out.estimate = head(out.estimate + opts.step * phi.apply_adjoint(residual), k);
    const double res = (y - phi.apply(out.estimate)).norm();

    if (res >= 2.0 * prev_res) {
      if (++doubling_streak >= 5)
        throw DivergenceError("iht: residual doubled 5 times in a row (step " +
                              std::to_string(opts.step) + "), aborting at iteration " +
                              std::to_string(it));
    } else {
      doubling_streak = 0;
    }
    prev_res = res;

    if (res < best_res * (1.0 - 1e-9)) {
      best_res = res;
      best = out.estimate;
      stagnant = 0;
    } else {
      ++stagnant;
    }

    if (res <= tol) {
      out.support = nonzero_support(out.estimate);
      return out;
    }
    if (stagnant >= 5) {
      out.diagnostic = "residual stagnated after " + std::to_string(it) + " iterations";
      break;
    }
  }

  if (out.diagnostic.empty()) {
    out.converged = false;
    out.diagnostic = "no convergence after " + std::to_string(opts.max_iters) +
                     " iterations; returning best iterate";
  }
  out.estimate = best;
  out.support = nonzero_support(out.estimate);
  return out;
}

class IhtRecoverer final : public BaseRecoverer {
 public:
  IhtRecoverer(std::shared_ptr<const RealizedEnsemble> phi, Index run_sparsity,
               GuaranteeSpec declared, IhtOptions opts = {})
      : phi_(std::move(phi)), run_sparsity_(run_sparsity), declared_(std::move(declared)),
        opts_(opts) {}

  RecoveryResult recover(const Vec& y) const override {
    return iht_recover(*phi_, y, run_sparsity_, opts_);
  }
  const GuaranteeSpec& guarantee() const override { return declared_; }
  const RealizedEnsemble& ensemble() const override { return *phi_; }
  Index output_sparsity() const override { return run_sparsity_; }
  std::string name() const override { return "iht"; }

 private:
  std::shared_ptr<const RealizedEnsemble> phi_;
  Index run_sparsity_;
  GuaranteeSpec declared_;
  IhtOptions opts_;
};

/// Same adaptation as make_cosamp_for_reduction: run at 2k, declare the
/// l2/l1 hypothesis at tail level 2k for target sparsity k.
inline std::shared_ptr<const BaseRecoverer> make_iht_for_reduction(
    std::shared_ptr<const RealizedEnsemble> phi, Index k, IhtOptions opts = {}) {
  GuaranteeSpec g;
  g.outer_p = Exponent(2.0);
  g.inner_q = Exponent(1.0);
  g.k = k;
  g.tail_level = TailLevel::TwoK;
  g.mode = GuaranteeMode::Uniform;
  return std::make_shared<IhtRecoverer>(std::move(phi), 2 * k, g, opts);
}

}  // namespace kterm
