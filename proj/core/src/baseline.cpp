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

#include "rategp/baseline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "rategp/errors.h"
#include "rategp/threads.h"

namespace rategp
{

auto scanone(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double significance_level)
    -> ScanResult
{
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (n < 3)
    {
        throw ArgumentError("scanone requires n >= 3 for the t test");
    }
    if (y.size() != n)
    {
        throw ArgumentError("phenotype length does not match design rows");
    }
    if (!y.allFinite() || !x.allFinite())
    {
        throw DataError("scanone inputs contain non-finite entries");
    }
    if (!(significance_level > 0.0 && significance_level < 1.0))
    {
        throw ArgumentError("significance level must lie in (0, 1)");
    }

    ScanResult result;
    result.p_values.resize(p);
    result.betas.resize(p);
    result.t_stats.resize(p);
    result.bonferroni_threshold = significance_level / static_cast<double>(p);

    const double y_mean = y.mean();
    const Eigen::VectorXd y_centered = y.array() - y_mean;
    const boost::math::students_t t_dist(static_cast<double>(n - 2));

    parallel_for(p,
                 [&](std::int64_t idx)
                 {
                     const auto j = static_cast<Eigen::Index>(idx);
                     const double x_mean = x.col(j).mean();
                     const Eigen::VectorXd x_centered = x.col(j).array() - x_mean;
                     const double sxx = x_centered.squaredNorm();
                     if (sxx <= 0.0)
                     {
                         throw DataError("scanone column " + std::to_string(j)
                                         + " is constant");
                     }
                     const double slope = x_centered.dot(y_centered) / sxx;
                     const double rss =
                         (y_centered - slope * x_centered).squaredNorm();
                     const double sigma2 = rss / static_cast<double>(n - 2);

                     double t_stat = 0.0;
                     double p_value = 1.0;
                     if (sigma2 > 0.0)
                     {
                         t_stat = slope / std::sqrt(sigma2 / sxx);
                         p_value =
                             2.0 * boost::math::cdf(boost::math::complement(
                                       t_dist, std::abs(t_stat)));
                     }
                     else if (slope != 0.0)
                     {
                         // Perfect fit: the statistic diverges; report the
                         // largest finite |t| and the smallest positive p.
                         t_stat = std::copysign(std::numeric_limits<double>::max(), slope);
                         p_value = 0.0;  // raised to denorm_min by the clamp below
                     }
                     // Keep p-values inside (0, 1] even when the tail
                     // probability underflows.
                     p_value = std::min(1.0, std::max(p_value,
                                                      std::numeric_limits<double>::denorm_min()));
                     result.betas(j) = slope;
                     result.t_stats(j) = t_stat;
                     result.p_values(j) = p_value;
                 });

    return result;
}

auto roc_auc(const Eigen::VectorXd& scores, ScoreOrientation orientation,
             const std::vector<Eigen::Index>& truth) -> PowerCurve
{
    const Eigen::Index p = scores.size();
    if (p < 2)
    {
        throw ArgumentError("roc_auc requires at least 2 variables");
    }
    if (!scores.allFinite())
    {
        throw DataError("roc_auc scores contain non-finite entries");
    }
    const std::set<Eigen::Index> causal(truth.begin(), truth.end());
    if (causal.empty() || static_cast<Eigen::Index>(causal.size()) >= p)
    {
        throw ArgumentError("truth set must be a non-empty proper subset of the variables");
    }
    for (const Eigen::Index j : causal)
    {
        if (j < 0 || j >= p)
        {
            throw ArgumentError("truth index " + std::to_string(j) + " out of range");
        }
    }

    PowerCurve curve;
    curve.scores = orientation == ScoreOrientation::HigherIsMoreSignificant
                       ? scores
                       : Eigen::VectorXd(-scores);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return curve.scores(a) > curve.scores(b); });

    const double n_pos = static_cast<double>(causal.size());
    const double n_neg = static_cast<double>(p) - n_pos;

    // Walk thresholds from most to least significant, emitting one curve
    // point per distinct score so ties form single (diagonal) segments.
    std::vector<double> fpr_points{0.0};
    std::vector<double> tpr_points{0.0};
    double tp = 0.0;
    double fp = 0.0;
    std::size_t i = 0;
    while (i < order.size())
    {
        const double threshold = curve.scores(order[i]);
        while (i < order.size() && curve.scores(order[i]) == threshold)
        {
            if (causal.count(order[i]) > 0)
            {
                tp += 1.0;
            }
            else
            {
                fp += 1.0;
            }
            ++i;
        }
        fpr_points.push_back(fp / n_neg);
        tpr_points.push_back(tp / n_pos);
    }

    curve.fpr = Eigen::Map<Eigen::VectorXd>(fpr_points.data(),
                                            static_cast<Eigen::Index>(fpr_points.size()));
    curve.tpr = Eigen::Map<Eigen::VectorXd>(tpr_points.data(),
                                            static_cast<Eigen::Index>(tpr_points.size()));

    double auc = 0.0;
    for (Eigen::Index k = 1; k < curve.fpr.size(); ++k)
    {
        auc += (curve.fpr(k) - curve.fpr(k - 1)) * 0.5 * (curve.tpr(k) + curve.tpr(k - 1));
    }
    curve.auc = auc;

    if (curve.scores.maxCoeff() == curve.scores.minCoeff())
    {
        curve.auc = 0.5;
        curve.notes.emplace_back("all scores identical: ranking carries no information");
    }
    return curve;
}

namespace
{

ThresholdPower confusion_rates(const std::vector<Eigen::Index>& variables,
                               const std::vector<bool>& flagged,
                               const std::vector<Eigen::Index>& truth)
{
    const std::set<Eigen::Index> causal(truth.begin(), truth.end());
    double tp = 0.0;
    double fp = 0.0;
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < variables.size(); ++i)
    {
        const bool is_causal = causal.count(variables[i]) > 0;
        (is_causal ? pos : neg) += 1.0;
        if (flagged[i])
        {
            (is_causal ? tp : fp) += 1.0;
        }
    }
    ThresholdPower power;
    power.tpr = pos > 0.0 ? tp / pos : 0.0;
    power.fpr = neg > 0.0 ? fp / neg : 0.0;
    return power;
}

}  // namespace

auto threshold_power(const CentralityReport& report, const std::vector<Eigen::Index>& truth)
    -> ThresholdPower
{
    return confusion_rates(report.variables, report.significant, truth);
}

auto threshold_power(const ScanResult& scan, const std::vector<Eigen::Index>& truth)
    -> ThresholdPower
{
    std::vector<Eigen::Index> variables(static_cast<std::size_t>(scan.n_variables()));
    std::iota(variables.begin(), variables.end(), Eigen::Index{0});
    std::vector<bool> flagged(variables.size());
    for (std::size_t j = 0; j < variables.size(); ++j)
    {
        flagged[j] = scan.p_values(static_cast<Eigen::Index>(j)) < scan.bonferroni_threshold;
    }
    return confusion_rates(variables, flagged, truth);
}

}  // namespace rategp
