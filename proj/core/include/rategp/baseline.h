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

#ifndef RATEGP_BASELINE_H_
#define RATEGP_BASELINE_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rategp/rate.h"

namespace rategp
{

// Per-variant single-predictor linear scan: slope, t statistic, and
// two-sided p-value of y regressed on each column with an intercept, plus
// the Bonferroni-corrected significance threshold level / p.
struct ScanResult
{
    Eigen::VectorXd p_values;  ///< in (0, 1]; perfect fits clamp to the smallest positive double
    Eigen::VectorXd betas;
    Eigen::VectorXd t_stats;
    double bonferroni_threshold = 0.0;

    auto n_variables() const -> Eigen::Index { return p_values.size(); }
};

// ROC curve of a per-variable ranking against a causal truth set. The
// stored scores are oriented so that higher always means more significant;
// tied scores are grouped into single curve segments, so the area follows
// the trapezoidal convention.
struct PowerCurve
{
    Eigen::VectorXd scores;  ///< oriented ranking basis (higher = more significant)
    Eigen::VectorXd fpr;     ///< non-decreasing, starts at 0, ends at 1
    Eigen::VectorXd tpr;     ///< non-decreasing, starts at 0, ends at 1
    double auc = 0.5;
    std::vector<std::string> notes;
};

// Confusion rates at a method's native significance threshold.
struct ThresholdPower
{
    double tpr = 0.0;
    double fpr = 0.0;
};

enum class ScoreOrientation
{
    HigherIsMoreSignificant,
    LowerIsMoreSignificant,
};

// Regresses y on each column of x separately (with intercept) and returns
// two-sided p-values from the t distribution with n - 2 degrees of freedom.
// Requires n >= 3 and non-constant columns.
auto scanone(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
             double significance_level = 0.05) -> ScanResult;

// Standard ROC over score thresholds against the causal set `truth`
// (original variable indices; must be a non-empty proper subset).
// All-identical scores yield auc = 0.5 exactly, with a note.
auto roc_auc(const Eigen::VectorXd& scores, ScoreOrientation orientation,
             const std::vector<Eigen::Index>& truth) -> PowerCurve;

// Native-threshold confusion rates: RATE flags rate > 1 / p_effective,
// the scan flags p-value < bonferroni_threshold.
auto threshold_power(const CentralityReport& report, const std::vector<Eigen::Index>& truth)
    -> ThresholdPower;
auto threshold_power(const ScanResult& scan, const std::vector<Eigen::Index>& truth)
    -> ThresholdPower;

}  // namespace rategp

#endif  // RATEGP_BASELINE_H_
