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

/// Greedy compressive sampling matching pursuit. Per iteration: pick the 2k
/// strongest proxy coordinates, merge with the current support, least-squares
/// on the merged support, prune to the k largest. Intended for dense Gaussian
/// ensembles in the m ~ k log(n/k) regime.

#include "kterm/quasinorm.hpp"
#include "kterm/recovery.hpp"

#include <Eigen/QR>

#include <memory>
#include <set>

namespace kterm {

struct CosampOptions {
  int max_iters = 50;
  double tol_rel = 1e-7;  // stop when ||y - Phi x_hat||_2 <= tol_rel * ||y||_2
};

inline RecoveryResult cosamp_recover(const RealizedEnsemble& phi, const Vec& y, Index k,
                                     const CosampOptions& opts = {}) {
  const Index n = phi.cols();
  if (y.size() != phi.rows()) throw std::invalid_argument("cosamp: dimension mismatch");
  if (k < 0) throw std::invalid_argument("cosamp: k must be nonnegative");
  if (k == 0 || lp_norm(y, Exponent(2.0)) == 0.0) return RecoveryResult::zero(n);

  RecoveryResult out = RecoveryResult::zero(n);
  Vec residual = y;
  const double ynorm = residual.norm();
  const double tol = opts.tol_rel * ynorm;

  Vec best = out.estimate;
  double best_res = ynorm;
  std::vector<Index> current_support;
  int stagnant = 0;

  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    const Vec proxy = phi.apply_adjoint(residual);
    const Support omega = top_support(proxy, std::min<Index>(2 * k, n));

    std::set<Index> merged(current_support.begin(), current_support.end());
    merged.insert(omega.indices.begin(), omega.indices.end());
    const std::vector<Index> t(merged.begin(), merged.end());
    const auto ts = static_cast<Index>(t.size());

    Eigen::MatrixXd phi_t(phi.rows(), ts);
    if (phi.is_sparse()) {
      phi_t.setZero();
      for (Index c = 0; c < ts; ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator itc(phi.sparse, t[static_cast<std::size_t>(c)]); itc; ++itc)
          phi_t(itc.row(), c) = itc.value();
    } else {
      for (Index c = 0; c < ts; ++c) phi_t.col(c) = phi.dense.col(t[static_cast<std::size_t>(c)]);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi_t);
    Vec coeffs;
    if (qr.rank() < ts) {
      // Rank-deficient subproblem: fall back to ridge-regularized normal
      // equations and flag it.
      Eigen::MatrixXd gram = phi_t.transpose() * phi_t;
      const double lambda = 1e-10 * std::max(1.0, gram.diagonal().maxCoeff());
      gram.diagonal().array() += lambda;
      coeffs = gram.ldlt().solve(phi_t.transpose() * y);
      out.regularized = true;
    } else {
      coeffs = qr.solve(y);
    }

    // Prune to the k largest coefficients.
    std::vector<std::pair<Index, double>> entries(static_cast<std::size_t>(ts));
    for (Index c = 0; c < ts; ++c)
      entries[static_cast<std::size_t>(c)] = {t[static_cast<std::size_t>(c)], coeffs[c]};
    const Support keep = top_support_of_entries(entries, std::min<Index>(k, ts));

    out.estimate.setZero();
    for (Index c = 0; c < ts; ++c) {
      const Index j = t[static_cast<std::size_t>(c)];
      if (keep.contains(j)) out.estimate[j] = coeffs[c];
    }
    current_support = keep.indices;

    Vec vals(static_cast<Index>(current_support.size()));
    for (std::size_t c = 0; c < current_support.size(); ++c)
      vals[static_cast<Index>(c)] = out.estimate[current_support[c]];
    residual = y - phi.apply_on_support(current_support, vals);
    const double res = residual.norm();

    if (res < best_res) {
      const bool improving = res < best_res * (1.0 - 1e-6);
      best_res = res;
      best = out.estimate;
      stagnant = improving ? 0 : stagnant + 1;
    } else {
      ++stagnant;
    }

    if (res <= tol) {
      out.converged = true;
      out.estimate = best;
      out.support = nonzero_support(out.estimate);
      return out;
    }
    if (stagnant >= 3) {
      // Residual floor reached (noise/tail regime); best iterate is the answer.
      out.converged = true;
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

class CosampRecoverer final : public BaseRecoverer {
 public:
  CosampRecoverer(std::shared_ptr<const RealizedEnsemble> phi, Index run_sparsity,
                  GuaranteeSpec declared, CosampOptions opts = {})
      : phi_(std::move(phi)), run_sparsity_(run_sparsity), declared_(std::move(declared)),
        opts_(opts) {
    if (run_sparsity_ < 0) throw std::invalid_argument("run_sparsity must be nonnegative");
  }

  RecoveryResult recover(const Vec& y) const override {
    return cosamp_recover(*phi_, y, run_sparsity_, opts_);
  }
  const GuaranteeSpec& guarantee() const override { return declared_; }
  const RealizedEnsemble& ensemble() const override { return *phi_; }
  Index output_sparsity() const override { return 3 * run_sparsity_; }
  std::string name() const override { return "cosamp"; }

 private:
  std::shared_ptr<const RealizedEnsemble> phi_;
  Index run_sparsity_;
  GuaranteeSpec declared_;
  CosampOptions opts_;
};

/// The adapted base scheme the reduction consumes: runs at sparsity 2k and
/// declares the l2/l1 hypothesis at tail level 2k for target sparsity k.
inline std::shared_ptr<const BaseRecoverer> make_cosamp_for_reduction(
    std::shared_ptr<const RealizedEnsemble> phi, Index k, CosampOptions opts = {}) {
  GuaranteeSpec g;
  g.outer_p = Exponent(2.0);
  g.inner_q = Exponent(1.0);
  g.k = k;
  g.tail_level = TailLevel::TwoK;
  g.mode = GuaranteeMode::Uniform;
  return std::make_shared<CosampRecoverer>(std::move(phi), 2 * k, g, opts);
}

}  // namespace kterm
