/*
 * Copyright 2026 The rategp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RATEGP_RATE_H_
#define RATEGP_RATE_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rategp/projection.h"

namespace rategp
{

// Gaussian effect-size posterior restricted to the variables still in play,
// after zero or more variables have been conditioned to zero.
//
// `variables[i]` is the original variable index of coordinate i, so results
// stay addressable by original index throughout a nullification cascade;
// `nullified` lists the variables conditioned to zero so far, in order.
struct ConditionedPosterior
{
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd lambda;
    std::vector<Eigen::Index> variables;
    std::vector<Eigen::Index> nullified;

    auto p_effective() const -> Eigen::Index { return mu.size(); }
};

// Per-variable centrality scores over the variables in play.
//
// kld(i) is the Kullback-Leibler divergence between the posterior of the
// other effect-size analogs before and after conditioning variable
// variables[i] to zero; rate = kld / sum(kld) sums to one.  delta is
// log(p_effective) minus the entropy of the rate distribution (zero exactly
// at uniformity) and ess = 100 / (1 + delta) is its percentage calibration.
// A variable is flagged significant when its rate strictly exceeds the
// uniform share 1 / p_effective.
struct CentralityReport
{
    std::vector<Eigen::Index> variables;
    Eigen::VectorXd kld;
    Eigen::VectorXd rate;
    double delta = 0.0;
    double ess = 100.0;
    std::vector<bool> significant;
    std::vector<Eigen::Index> nullified;
    Eigen::Index p_effective = 0;

    // Negative closed-form evaluations (sampling noise) are clamped to zero
    // and counted; >5% clamped entries adds a quality note.
    int clamped_count = 0;
    // Set when every KLD clamps to zero: rates are then reported uniform.
    bool no_signal = false;
    std::vector<std::string> notes;
};

// Wraps a full effect-size posterior as the root state of a cascade
// (all variables in play, nothing nullified).
auto as_conditioned(const EffectSizePosterior& post) -> ConditionedPosterior;

// Closed-form KLD for conditioning `variable` (an original index) to zero:
//   1/2 [ -log|S L| + tr(S L) + 1 - p_eff + alpha_j mu_j^2 ],
// where S and L are the variable-deleted principal submatrices of sigma and
// lambda, and alpha_j = l_j' L^-1 l_j with l_j the deleted column of lambda.
// The log-determinant splits over factorizations of S and L; when a
// submatrix is numerically singular, eigenvalues below 1e-12 of the largest
// are excluded from both log-determinants and the trace is taken over the
// same retained subspaces.
// Throws ArgumentError when the variable is not in play or p_effective < 2.
auto kld_at_zero(const ConditionedPosterior& post, Eigen::Index variable) -> double;

// The quadratic form alpha_j (the coefficient of the conditioning value in
// the closed-form KLD), computed by one symmetric linear solve.
auto alpha(const ConditionedPosterior& post, Eigen::Index variable) -> double;

// Full centrality report over the variables in play (KLD computations run in
// parallel).  All KLDs clamping to zero yields a uniform report flagged
// no_signal rather than an error.
auto compute_rates(const ConditionedPosterior& post) -> CentralityReport;
auto compute_rates(const EffectSizePosterior& post) -> CentralityReport;

// Conditions `variable` to zero and drops it from play:
//   new mean      = mu_{-j} + theta_j (0 - mu_j),  theta_j = -L^-1 l_j,
//   new precision = L (the deleted submatrix of lambda),
//   new covariance = pseudoinverse of the new precision.
auto nullify_and_condition(const ConditionedPosterior& post, Eigen::Index variable)
    -> ConditionedPosterior;

// Repeats { nullify the argmax-rate variable (ties to the lowest original
// index, noted in the report), recompute rates } up to max_steps times,
// stopping early once delta falls below delta_stop.  Returns the report
// after each nullification.  Requires max_steps <= p_effective - 2.
auto centrality_cascade(const ConditionedPosterior& post, int max_steps,
                        double delta_stop = 0.01) -> std::vector<CentralityReport>;

// Fixed-order variant: nullifies the given original indices in order,
// recomputing rates after each, regardless of their rank.
auto nullification_path(const ConditionedPosterior& post,
                        const std::vector<Eigen::Index>& order) -> std::vector<CentralityReport>;

}  // namespace rategp

#endif  // RATEGP_RATE_H_
