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

/// CountSketch decoding: estimate every coordinate as the median over
/// repetitions of its signed bucket value, then keep the strongest k_report.
/// The estimate of coordinate j reads only the buckets j hashes to.

#include "kterm/measurement.hpp"
#include "kterm/quasinorm.hpp"
#include "kterm/recovery.hpp"

#include <memory>

namespace kterm {

/// Median-of-signs estimate of a single coordinate. rows_r must be odd.
inline double count_sketch_estimate(const Vec& sketch_y, const MeasurementEnsemble& e,
                                    Index j) {
  std::vector<double> votes(static_cast<std::size_t>(e.rows_r));
  for (Index t = 0; t < e.rows_r; ++t) {
    const SketchCell c = count_sketch_cell(e, t, j);
    votes[static_cast<std::size_t>(t)] = c.sign * sketch_y[c.row];
  }
  auto mid = votes.begin() + static_cast<std::ptrdiff_t>(votes.size() / 2);
  std::nth_element(votes.begin(), mid, votes.end());
  return *mid;
}

inline RecoveryResult countsketch_recover(const Vec& sketch_y, const MeasurementEnsemble& e,
                                          Index k_report) {
  if (e.kind != EnsembleKind::CountSketch)
    throw std::invalid_argument("countsketch_recover requires a count_sketch ensemble");
  if (e.rows_r % 2 == 0)
    throw std::invalid_argument("countsketch_recover requires odd rows_r (median)");
  if (sketch_y.size() != e.m) throw std::invalid_argument("countsketch: dimension mismatch");
  if (k_report < 0 || k_report > e.n)
    throw std::out_of_range("countsketch: k_report out of range");

  std::vector<std::pair<Index, double>> estimates(static_cast<std::size_t>(e.n));
  for (Index j = 0; j < e.n; ++j)
    estimates[static_cast<std::size_t>(j)] = {j, count_sketch_estimate(sketch_y, e, j)};

  const Support keep = top_support_of_entries(estimates, k_report);
  RecoveryResult out = RecoveryResult::zero(e.n);
  for (Index j : keep.indices) out.estimate[j] = count_sketch_estimate(sketch_y, e, j);
  out.support = nonzero_support(out.estimate);
  out.iterations = 1;
  return out;
}

class CountSketchRecoverer final : public BaseRecoverer {
 public:
  CountSketchRecoverer(std::shared_ptr<const RealizedEnsemble> phi, Index k_report,
                       GuaranteeSpec declared)
      : phi_(std::move(phi)), k_report_(k_report), declared_(std::move(declared)) {
    if (phi_->desc.kind != EnsembleKind::CountSketch)
      throw std::invalid_argument("CountSketchRecoverer requires a count_sketch ensemble");
    if (phi_->desc.rows_r % 2 == 0)
      throw std::invalid_argument("CountSketchRecoverer requires odd rows_r");
  }

  RecoveryResult recover(const Vec& y) const override {
    return countsketch_recover(y, phi_->desc, k_report_);
  }
  const GuaranteeSpec& guarantee() const override { return declared_; }
  const RealizedEnsemble& ensemble() const override { return *phi_; }
  Index output_sparsity() const override { return k_report_; }
  std::string name() const override { return "countsketch"; }

 private:
  std::shared_ptr<const RealizedEnsemble> phi_;
  Index k_report_;
  GuaranteeSpec declared_;
};

/// Adapted l2/l2 base scheme for the reduction: reports 2k coordinates and
/// declares the hypothesis at tail level 2k for target sparsity k.
inline std::shared_ptr<const BaseRecoverer> make_countsketch_for_reduction(
    std::shared_ptr<const RealizedEnsemble> phi, Index k, double delta) {
  GuaranteeSpec g;
  g.outer_p = Exponent(2.0);
  g.inner_q = Exponent(2.0);
  g.k = k;
  g.tail_level = TailLevel::TwoK;
  g.mode = GuaranteeMode::Nonuniform;
  g.delta = delta;
  return std::make_shared<CountSketchRecoverer>(std::move(phi), 2 * k, g);
}

}  // namespace kterm
