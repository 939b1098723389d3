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

/// The black-box reduction between recovery guarantees: wrap a base scheme
/// whose output is w, project w onto its largest 2k coordinates (k for the
/// q = r = s <= 1 variant), and the lp/lq hypothesis at tail 2k turns into an
/// lr/ls guarantee at tail k with an explicit constant. The projection adds
/// O(S) work on top of the base scheme (S = base output support), via
/// selection over the output's nonzero entries only.

#include "kterm/quasinorm.hpp"
#include "kterm/recovery.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace kterm {

enum class ProjectionLevel { K, TwoK };

/// Exponent constraints of the reduction: p >= r >= s > 0 and q >= s.
inline void validate_reduction_exponents(Exponent p, Exponent q, Exponent r, Exponent s) {
  if (!(p >= r)) throw std::invalid_argument("reduction requires p >= r");
  if (!(r >= s)) throw std::invalid_argument("reduction requires r >= s");
  if (!(q >= s)) throw std::invalid_argument("reduction requires q >= s");
}

/// The constant C_{p,q,r} the reduction promises, from the branch-appropriate
/// closed form:
///   r <= 1:  (1 + 3 * 2^(1 - r/p) * C'^r)^(1/r)
///   r >  1:  1 + 2 * 4^(1/r - 1/p) * (1 + C')
/// cprime is the base scheme's constant C' (calibrated empirically here;
/// cprime = 0 gives the degenerate perfect-base limit).
inline double predicted_constant(Exponent p, Exponent q, Exponent r, Exponent s,
                                 double cprime) {
  validate_reduction_exponents(p, q, r, s);
  if (cprime < 0.0) throw std::invalid_argument("predicted_constant requires cprime >= 0");
  if (r.is_inf() || r.value() > 1.0) {
    return 1.0 + 2.0 * std::pow(4.0, r.inv() - p.inv()) * (1.0 + cprime);
  }
  const double re = r.value();
  return std::pow(1.0 + 3.0 * std::pow(2.0, 1.0 - re * p.inv()) * std::pow(cprime, re),
                  1.0 / re);
}

struct ReductionConfig {
  Index k = 0;
  Exponent p{2.0};  // base guarantee exponents
  Exponent q{1.0};
  Exponent r{1.0};  // target guarantee exponents
  Exponent s{1.0};
  ProjectionLevel level = ProjectionLevel::TwoK;
  std::optional<double> base_constant;  // calibrated C'

  void validate() const {
    if (k < 0) throw std::invalid_argument("reduction requires k >= 0");
    validate_reduction_exponents(p, q, r, s);
    if (level == ProjectionLevel::K) {
      // The top-k variant is only proved for q = r = s <= 1.
      if (!(q == r && r == s) || r.is_inf() || r.value() > 1.0)
        throw std::invalid_argument("projection level k requires q = r = s <= 1");
    }
  }

  Index projection_count() const { return level == ProjectionLevel::K ? k : 2 * k; }
};

/// The wrapped recoverer R: computes w = base(y), returns head(w, 2k) (or
/// head(w, k) for the top-k variant). Deterministic post-processing of the
/// base output; never touches Phi or randomness, so uniformity is preserved.
class ReducedRecoverer final : public BaseRecoverer {
 public:
  ReducedRecoverer(std::shared_ptr<const BaseRecoverer> base, ReductionConfig cfg)
      : base_(std::move(base)), cfg_(cfg) {
    cfg_.validate();
    const GuaranteeSpec& g = base_->guarantee();
    if (!(g.outer_p == cfg_.p) || !(g.inner_q == cfg_.q))
      throw std::invalid_argument("reduction exponents (p, q) must match the base guarantee");
    if (g.k != cfg_.k)
      throw std::invalid_argument("reduction k must match the base guarantee k");
    const TailLevel needed =
        cfg_.level == ProjectionLevel::TwoK ? TailLevel::TwoK : TailLevel::K;
    if (g.tail_level != needed)
      throw std::invalid_argument("base guarantee tail level incompatible with projection level");
    target_ = g;
    target_.outer_p = cfg_.r;
    target_.inner_q = cfg_.s;
    target_.tail_level = TailLevel::K;
    target_.constant = cfg_.base_constant
                           ? std::optional<double>(predicted_constant(
                                 cfg_.p, cfg_.q, cfg_.r, cfg_.s, *cfg_.base_constant))
                           : std::nullopt;
  }

  RecoveryResult recover(const Vec& y) const override {
    RecoveryResult res = base_->recover(y);
    project_in_place(res);
    return res;
  }

  /// The O(S) post-processing step, exposed so overhead can be measured apart
  /// from the base scheme.
  void project_in_place(RecoveryResult& res) const {
    const std::vector<Index>& support =
        !res.support.empty() ? res.support : (res.support = nonzero_support(res.estimate));
    std::vector<std::pair<Index, double>> entries;
    entries.reserve(support.size());
    for (Index j : support) entries.emplace_back(j, res.estimate[j]);
    const Support keep = top_support_of_entries(std::move(entries), cfg_.projection_count());
    Vec projected = Vec::Zero(res.estimate.size());
    for (Index j : keep.indices) projected[j] = res.estimate[j];
    res.estimate = std::move(projected);
    res.support = keep.indices;
  }

  const GuaranteeSpec& guarantee() const override { return target_; }
  const RealizedEnsemble& ensemble() const override { return base_->ensemble(); }
  Index output_sparsity() const override { return cfg_.projection_count(); }
  std::string name() const override { return base_->name() + "+topk"; }
  const ReductionConfig& config() const { return cfg_; }
  const BaseRecoverer& base() const { return *base_; }

 private:
  std::shared_ptr<const BaseRecoverer> base_;
  ReductionConfig cfg_;
  GuaranteeSpec target_;
};

inline std::shared_ptr<const ReducedRecoverer> reduce(
    std::shared_ptr<const BaseRecoverer> base, ReductionConfig cfg) {
  return std::make_shared<ReducedRecoverer>(std::move(base), cfg);
}

/// head(w, kappa) minimizes ||w - v||_p over kappa-sparse v; in particular
/// ||w - head(w, kappa)||_p <= ||w - restrict(x, top_support(x, kappa))||_p
/// for any reference x.
inline IneqCheck projection_optimality_check(const Vec& w, const Vec& x, Index kappa,
                                             Exponent p, double tol = kDefaultTol) {
  if (w.size() != x.size()) throw std::invalid_argument("size mismatch");
  const double lhs = lp_norm(tail(w, kappa), p);
  const double rhs = lp_norm(w - restrict_to(x, top_support(x, kappa)), p);
  return make_check(lhs, rhs, tol);
}

struct ProofStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool equality = false;  // step asserts lhs == rhs rather than lhs <= rhs
};

/// The theorem's inequality chain evaluated on a concrete (x, w) pair, one
/// executable assertion per proof line. `steps` walks the branch for the
/// given r; `conclusion_*` restate the final guarantee with the supplied (or
/// per-trial) C'.
struct ProofChainLedger {
  bool r_le_1 = false;
  double cprime = 0.0;
  bool hypothesis_vacuous = false;  // tail denominator zero with nonzero base error
  std::vector<ProofStep> steps;
  double conclusion_lhs = 0.0;  // ||x - z||_r
  double conclusion_rhs = 0.0;  // C_{p,q,r} k^(1/r - 1/s) ||tail(x, k)||_s
  bool all_hold = true;

  const ProofStep* first_failure() const {
    for (const auto& s : steps)
      if (!s.holds) return &s;
    return nullptr;
  }
};

namespace detail {

inline void push_step(ProofChainLedger& ledger, std::string name, double lhs, double rhs,
                      double tol, bool equality = false) {
  ProofStep st;
  st.name = std::move(name);
  st.lhs = lhs;
  st.rhs = rhs;
  st.equality = equality;
  st.holds = equality ? eq_with_slack(lhs, rhs, tol) : leq_with_slack(lhs, rhs, tol);
  ledger.all_hold = ledger.all_hold && st.holds;
  ledger.steps.push_back(std::move(st));
}

}  // namespace detail

/// Evaluates every intermediate quantity of the relevant proof branch on
/// (x, w) and checks each step numerically. kappa is the projection count
/// (2k, or k for the top-k variant); A = top_support(x, kappa),
/// B = top_support(w, kappa), z = w_B. If cprime is not given, the per-trial
/// ratio ||x - w||_p / (k^(1/p-1/q) ||tail(x, kappa)||_q) is used, making the
/// hypothesis step tight.
inline ProofChainLedger verify_proof_chain(const Vec& x, const Vec& w, Index k, Exponent p,
                                           Exponent q, Exponent r, Exponent s,
                                           ProjectionLevel level = ProjectionLevel::TwoK,
                                           std::optional<double> cprime = std::nullopt,
                                           double tol = kDefaultTol) {
  validate_reduction_exponents(p, q, r, s);
  if (x.size() != w.size()) throw std::invalid_argument("size mismatch");
  if (level == ProjectionLevel::K && (!(q == r && r == s) || r.is_inf() || r.value() > 1.0))
    throw std::invalid_argument("projection level k requires q = r = s <= 1");

  ProofChainLedger ledger;
  ledger.r_le_1 = !r.is_inf() && r.value() <= 1.0;

  const Index kappa = level == ProjectionLevel::K ? k : 2 * k;
  const double kd = static_cast<double>(k);
  const double kap = static_cast<double>(kappa);

  const Support a_sup = top_support(x, std::min(kappa, x.size()));
  const Support b_sup = top_support(w, std::min(kappa, w.size()));
  const Vec x_a = restrict_to(x, a_sup);
  const Vec x_b = restrict_to(x, b_sup);
  const Vec w_a = restrict_to(w, a_sup);
  const Vec w_b = restrict_to(w, b_sup);
  const Vec z = w_b;

  const double base_err = lp_norm(x - w, p);
  const double hyp_tail = lp_norm(tail(x, kappa), q);
  const double hyp_scale = std::pow(kd, p.inv() - q.inv()) * hyp_tail;
  if (cprime) {
    ledger.cprime = *cprime;
    if (base_err > ledger.cprime * hyp_scale * (1.0 + tol)) ledger.hypothesis_vacuous = true;
  } else if (hyp_scale > 0.0) {
    ledger.cprime = base_err / hyp_scale;
  } else if (base_err == 0.0) {
    ledger.cprime = 0.0;
  } else {
    ledger.hypothesis_vacuous = true;  // no finite C' satisfies the hypothesis
  }

  const double tail_k_s = lp_norm(tail(x, k), s);
  const double tail_kap_r = lp_norm(tail(x, kappa), r);
  const double cp = ledger.cprime;

  if (ledger.r_le_1) {
    // Quasinorm branch; every quantity is an r-th power.
    const double re = r.value();
    auto powr = [re](double v) { return std::pow(v, re); };
    const double xz = powr(lp_norm(x - z, r));
    const double xbwb = powr(lp_norm(x_b - w_b, r));
    const double xawa = powr(lp_norm(w_a - x_a, r));
    const double xr = powr(lp_norm(x, r));
    const double xbr = powr(lp_norm(x_b, r));
    const double wbr = powr(lp_norm(w_b, r));
    const double war = powr(lp_norm(w_a, r));
    const double holder = std::pow(kap, 1.0 - re * p.inv());

    const double e1 = xbwb + powr(lp_norm(x - x_b, r));
    const double e2 = xbwb + xr - xbr;
    const double e3 = 2.0 * xbwb + xr - wbr;
    const double e4 = 2.0 * xbwb + xr - war;
    const double e5 = 2.0 * xbwb + xawa + powr(tail_kap_r);
    const double e6 = 2.0 * holder * powr(lp_norm(x_b - w_b, p)) +
                      holder * powr(lp_norm(w_a - x_a, p)) + powr(tail_kap_r);
    const double e7 = 3.0 * holder * powr(base_err) + powr(tail_kap_r);

    detail::push_step(ledger, "triangle split x-z", xz, e1, tol);
    detail::push_step(ledger, "restrict complement identity", e1, e2, tol, true);
    detail::push_step(ledger, "triangle on w_B", e2, e3, tol);
    detail::push_step(ledger, "B maximizes ||w_S||_r", e3, e4, tol);
    detail::push_step(ledger, "triangle on x_A", e4, e5, tol);
    detail::push_step(ledger, "sparse Holder on 2k-sparse diffs", e5, e6, tol);
    detail::push_step(ledger, "restrictions bounded by full diff", e6, e7, tol);
    if (!ledger.hypothesis_vacuous) {
      const double e8 = 3.0 * std::pow(kap / kd, 1.0 - re * p.inv()) * std::pow(cp, re) *
                            std::pow(kd, 1.0 - re * q.inv()) * powr(hyp_tail) +
                        powr(tail_kap_r);
      detail::push_step(ledger, "base guarantee hypothesis", e7, e8, tol);
      double e9;
      if (level == ProjectionLevel::TwoK) {
        e9 = (1.0 + 3.0 * std::pow(2.0, 1.0 - re * p.inv()) * std::pow(cp, re)) *
             std::pow(kd, 1.0 - re * s.inv()) * powr(tail_k_s);
        detail::push_step(ledger, "shelling to tail k", e8, e9, tol);
      } else {
        // q = r = s: both terms already live at tail k; no shelling needed.
        e9 = (1.0 + 3.0 * std::pow(kap / kd, 1.0 - re * p.inv()) * std::pow(cp, re)) *
             std::pow(kd, 1.0 - re * s.inv()) * powr(tail_k_s);
        detail::push_step(ledger, "collect terms at tail k", e8, e9, tol);
      }
      ledger.conclusion_lhs = lp_norm(x - z, r);
      ledger.conclusion_rhs = predicted_constant(p, q, r, s, cp) *
                              std::pow(kd, r.inv() - s.inv()) * tail_k_s;
      detail::push_step(ledger, "conclusion", ledger.conclusion_lhs, ledger.conclusion_rhs,
                        tol);
    }
  } else {
    const double xz = lp_norm(x - z, r);
    const double xa_r = lp_norm(x - x_a, r);
    const double xa_p = lp_norm(x - x_a, p);
    const double xw_p = base_err;
    const double holder4 = std::pow(2.0 * kap, r.inv() - p.inv());

    const double f1 = xa_r + lp_norm(x_a - w_b, r);
    const double f2 = xa_r + holder4 * lp_norm(x_a - w_b, p);
    const double f3 = xa_r + holder4 * (xa_p + lp_norm(x - w_b, p));
    const double f4 = xa_r + holder4 * (xa_p + xw_p + lp_norm(tail(w, kappa), p));
    const double f5 = xa_r + holder4 * (xa_p + xw_p + lp_norm(w - x_a, p));
    const double f6 = xa_r + holder4 * (2.0 * xa_p + 2.0 * xw_p);

    detail::push_step(ledger, "triangle split x-z", xz, f1, tol);
    detail::push_step(ledger, "sparse Holder on union support", f1, f2, tol);
    detail::push_step(ledger, "triangle via x", f2, f3, tol);
    detail::push_step(ledger, "triangle via w", f3, f4, tol);
    detail::push_step(ledger, "projection optimality of w_B", f4, f5, tol);
    detail::push_step(ledger, "triangle on w - x_A", f5, f6, tol);
    if (!ledger.hypothesis_vacuous) {
      const double f7 = tail_kap_r + 2.0 * holder4 * lp_norm(tail(x, kappa), p) +
                        2.0 * holder4 * xw_p;
      detail::push_step(ledger, "rewrite via tails", f6, f7, tol, true);
      const double f8 = tail_kap_r + 2.0 * holder4 * lp_norm(tail(x, kappa), p) +
                        2.0 * std::pow(2.0 * kap / kd, r.inv() - p.inv()) * cp *
                            std::pow(kd, r.inv() - q.inv()) * hyp_tail;
      detail::push_step(ledger, "base guarantee hypothesis", f7, f8, tol);
      const double f9 = (1.0 + 2.0 * std::pow(2.0 * kap / kd, r.inv() - p.inv()) * (1.0 + cp)) *
                        std::pow(kd, r.inv() - s.inv()) * tail_k_s;
      detail::push_step(ledger, "shelling to tail k", f8, f9, tol);
      ledger.conclusion_lhs = xz;
      ledger.conclusion_rhs = predicted_constant(p, q, r, s, cp) *
                              std::pow(kd, r.inv() - s.inv()) * tail_k_s;
      detail::push_step(ledger, "conclusion", ledger.conclusion_lhs, ledger.conclusion_rhs,
                        tol);
    }
  }
  return ledger;
}

}  // namespace kterm
