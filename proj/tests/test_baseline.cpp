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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "rategp/baseline.h"
#include "rategp/errors.h"
#include "rategp/rate.h"
#include "support/test_util.h"

namespace rategp
{
namespace
{

// Oracle: simple regression of y on one predictor with intercept, written
// out coefficient by coefficient, plus the regularized incomplete beta
// function for the two-sided t-tail (continued-fraction-free formulation
// via the symmetric relation to the F distribution is avoided; we integrate
// numerically instead, which is plenty at test sizes).
struct SimpleFit
{
    double slope;
    double t_stat;
    double p_value;
};

double student_t_two_sided(double t, double dof)
{
    // Two-sided tail by numerical integration of the t density from |t| to
    // a far cutoff; Simpson's rule with a fine grid is a fully independent
    // check on the library-based implementation.
    const double a = std::abs(t);
    const double b = a + 60.0;  // density is numerically zero past this
    const int steps = 200000;
    const double h = (b - a) / steps;
    const double log_norm = std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0)
                            - 0.5 * std::log(dof * std::acos(-1.0));
    const auto density = [&](double x)
    { return std::exp(log_norm - (dof + 1.0) / 2.0 * std::log1p(x * x / dof)); };
    double sum = density(a) + density(b);
    for (int i = 1; i < steps; ++i)
    {
        sum += density(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    }
    return std::min(1.0, 2.0 * sum * h / 3.0);
}

SimpleFit simple_regression_oracle(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const double n = static_cast<double>(x.size());
    const double x_mean = x.mean();
    const double y_mean = y.mean();
    double sxx = 0.0;
    double sxy = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        sxx += (x(i) - x_mean) * (x(i) - x_mean);
        sxy += (x(i) - x_mean) * (y(i) - y_mean);
    }
    SimpleFit fit;
    fit.slope = sxy / sxx;
    double rss = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        const double fitted = y_mean + fit.slope * (x(i) - x_mean);
        rss += (y(i) - fitted) * (y(i) - fitted);
    }
    const double sigma2 = rss / (n - 2.0);
    fit.t_stat = fit.slope / std::sqrt(sigma2 / sxx);
    fit.p_value = student_t_two_sided(fit.t_stat, n - 2.0);
    return fit;
}

TEST_CASE("scan statistics match a per-column regression oracle")
{
    std::mt19937_64 rng(81);
    const Eigen::Index n = 60;
    const Eigen::Index p = 8;
    const Eigen::MatrixXd x = testing::random_matrix(n, p, rng);
    Eigen::VectorXd y = testing::random_vector(n, rng) + x.col(2) * 0.8;

    const ScanResult scan = scanone(x, y, 0.05);
    REQUIRE(scan.n_variables() == p);
    REQUIRE(scan.bonferroni_threshold == Catch::Approx(0.05 / static_cast<double>(p)));

    for (Eigen::Index j = 0; j < p; ++j)
    {
        const SimpleFit oracle = simple_regression_oracle(x.col(j), y);
        CAPTURE(j);
        REQUIRE(scan.betas(j) == Catch::Approx(oracle.slope).epsilon(1e-10));
        REQUIRE(scan.t_stats(j) == Catch::Approx(oracle.t_stat).epsilon(1e-10));
        REQUIRE(scan.p_values(j) == Catch::Approx(oracle.p_value).epsilon(1e-6).margin(1e-12));
    }
}

TEST_CASE("null p-values are uniform by a Kolmogorov-Smirnov bound")
{
    std::mt19937_64 rng(82);
    const Eigen::Index n = 100;
    const Eigen::Index p = 400;
    const Eigen::MatrixXd x = testing::random_matrix(n, p, rng);
    const Eigen::VectorXd y = testing::random_vector(n, rng);  // independent of x

    const ScanResult scan = scanone(x, y, 0.05);
    std::vector<double> sorted(scan.p_values.data(), scan.p_values.data() + p);
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
    {
        const double empirical_hi = static_cast<double>(i + 1) / static_cast<double>(p);
        const double empirical_lo = static_cast<double>(i) / static_cast<double>(p);
        ks = std::max({ks, std::abs(empirical_hi - sorted[static_cast<std::size_t>(i)]),
                       std::abs(sorted[static_cast<std::size_t>(i)] - empirical_lo)});
    }
    // Critical value at alpha = 0.001 is 1.95 / sqrt(p); columns are
    // mutually independent here so the classical bound applies.
    REQUIRE(ks < 1.95 / std::sqrt(static_cast<double>(p)));
}

TEST_CASE("perfect fits saturate instead of dividing by zero")
{
    // The residual must vanish exactly, so the design uses integers with an
    // exact zero mean and a dyadic intercept: every intermediate rounds to
    // the true value and rss is a true 0.0.
    std::mt19937_64 rng(83);
    const Eigen::Index n = 20;
    Eigen::MatrixXd x = testing::random_matrix(n, 2, rng);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        x(i, 0) = static_cast<double>(i - 10 + (i >= 10 ? 1 : 0));  // -10..-1, 1..10
    }
    const Eigen::VectorXd y = 3.0 * x.col(0) + Eigen::VectorXd::Constant(n, 0.5);

    const ScanResult scan = scanone(x, y, 0.05);
    REQUIRE(scan.betas(0) == 3.0);
    REQUIRE(scan.p_values(0) > 0.0);  // never an exact zero
    REQUIRE(scan.p_values(0) == std::numeric_limits<double>::denorm_min());
    REQUIRE(scan.t_stats(0) == std::numeric_limits<double>::max());
}

TEST_CASE("scan input validation")
{
    std::mt19937_64 rng(84);
    const Eigen::MatrixXd x = testing::random_matrix(10, 3, rng);
    const Eigen::VectorXd y = testing::random_vector(10, rng);
    REQUIRE_THROWS_AS(scanone(x.topRows(2), y.head(2), 0.05), ArgumentError);
    REQUIRE_THROWS_AS(scanone(x, y.head(5), 0.05), ArgumentError);
    REQUIRE_THROWS_AS(scanone(x, y, 0.0), ArgumentError);
    REQUIRE_THROWS_AS(scanone(x, y, 1.0), ArgumentError);
}

// Oracle: AUC as the rank-sum statistic (concordant pairs + half ties)
// over all positive/negative pairs.
double pairwise_auc_oracle(const Eigen::VectorXd& scores,
                           const std::vector<Eigen::Index>& positives)
{
    std::vector<bool> is_positive(static_cast<std::size_t>(scores.size()), false);
    for (const Eigen::Index j : positives)
    {
        is_positive[static_cast<std::size_t>(j)] = true;
    }
    double concordant = 0.0;
    double pairs = 0.0;
    for (Eigen::Index i = 0; i < scores.size(); ++i)
    {
        if (!is_positive[static_cast<std::size_t>(i)])
        {
            continue;
        }
        for (Eigen::Index k = 0; k < scores.size(); ++k)
        {
            if (is_positive[static_cast<std::size_t>(k)])
            {
                continue;
            }
            pairs += 1.0;
            if (scores(i) > scores(k))
            {
                concordant += 1.0;
            }
            else if (scores(i) == scores(k))
            {
                concordant += 0.5;
            }
        }
    }
    return concordant / pairs;
}

TEST_CASE("roc auc equals the pairwise rank statistic, ties included")
{
    std::mt19937_64 rng(85);
    for (int rep = 0; rep < 20; ++rep)
    {
        const Eigen::Index p = 30;
        Eigen::VectorXd scores = testing::random_vector(p, rng);
        // Force ties in half the replicates.
        if (rep % 2 == 0)
        {
            for (Eigen::Index j = 0; j < p; ++j)
            {
                scores(j) = std::round(scores(j) * 4.0) / 4.0;
            }
        }
        std::vector<Eigen::Index> positives;
        for (Eigen::Index j = 0; j < p; ++j)
        {
            if (std::bernoulli_distribution(0.3)(rng))
            {
                positives.push_back(j);
            }
        }
        if (positives.empty() || positives.size() == static_cast<std::size_t>(p))
        {
            positives.assign({0, 1});
        }

        const PowerCurve curve =
            roc_auc(scores, ScoreOrientation::HigherIsMoreSignificant, positives);
        CAPTURE(rep);
        REQUIRE(curve.auc
                == Catch::Approx(pairwise_auc_oracle(scores, positives)).epsilon(1e-12));
        REQUIRE(curve.fpr(0) == 0.0);
        REQUIRE(curve.tpr(curve.tpr.size() - 1) == 1.0);
        REQUIRE(curve.fpr(curve.fpr.size() - 1) == 1.0);
        // Monotone nondecreasing in both coordinates.
        for (Eigen::Index i = 1; i < curve.fpr.size(); ++i)
        {
            REQUIRE(curve.fpr(i) >= curve.fpr(i - 1));
            REQUIRE(curve.tpr(i) >= curve.tpr(i - 1));
        }
    }
}

TEST_CASE("lower-is-significant scores are negated consistently")
{
    std::mt19937_64 rng(86);
    const Eigen::Index p = 25;
    const Eigen::VectorXd raw = testing::random_vector(p, rng);
    const std::vector<Eigen::Index> positives{1, 4, 7};

    const PowerCurve higher =
        roc_auc(raw, ScoreOrientation::HigherIsMoreSignificant, positives);
    const PowerCurve lower =
        roc_auc(-raw, ScoreOrientation::LowerIsMoreSignificant, positives);
    REQUIRE(higher.auc == Catch::Approx(lower.auc).epsilon(1e-14));
}

TEST_CASE("random scores hover at auc one half and constant scores pin it")
{
    std::mt19937_64 rng(87);
    // Average AUC of pure-noise scores over many draws concentrates at 0.5.
    double total = 0.0;
    const int reps = 300;
    for (int rep = 0; rep < reps; ++rep)
    {
        const Eigen::VectorXd scores = testing::random_vector(40, rng);
        std::vector<Eigen::Index> positives;
        for (Eigen::Index j = 0; j < 40; j += 3)
        {
            positives.push_back(j);
        }
        total += roc_auc(scores, ScoreOrientation::HigherIsMoreSignificant, positives).auc;
    }
    REQUIRE(total / reps == Catch::Approx(0.5).margin(0.02));

    const PowerCurve flat = roc_auc(Eigen::VectorXd::Ones(10),
                                    ScoreOrientation::HigherIsMoreSignificant, {0, 1});
    REQUIRE(flat.auc == 0.5);
    REQUIRE_FALSE(flat.notes.empty());
}

TEST_CASE("roc input validation")
{
    const Eigen::VectorXd scores = Eigen::VectorXd::LinSpaced(6, 0.0, 1.0);
    REQUIRE_THROWS_AS(roc_auc(scores, ScoreOrientation::HigherIsMoreSignificant, {}),
                      ArgumentError);
    REQUIRE_THROWS_AS(
        roc_auc(scores, ScoreOrientation::HigherIsMoreSignificant, {0, 1, 2, 3, 4, 5}),
        ArgumentError);
    REQUIRE_THROWS_AS(roc_auc(scores, ScoreOrientation::HigherIsMoreSignificant, {6}),
                      ArgumentError);
    REQUIRE_THROWS_AS(
        roc_auc(scores.head(1), ScoreOrientation::HigherIsMoreSignificant, {0}),
        ArgumentError);
}

TEST_CASE("native-threshold power counts confusion rates")
{
    // Hand-built centrality report: variables 0 and 1 flagged, truth is
    // {0, 2}: one true positive of two positives, one false positive of
    // three negatives.
    CentralityReport report;
    report.variables = {0, 1, 2, 3, 4};
    report.rate = Eigen::VectorXd::Constant(5, 0.2);
    report.kld = report.rate;
    report.significant = {true, true, false, false, false};
    report.p_effective = 5;

    const ThresholdPower power = threshold_power(report, {0, 2});
    REQUIRE(power.tpr == Catch::Approx(0.5));
    REQUIRE(power.fpr == Catch::Approx(1.0 / 3.0));

    ScanResult scan;
    scan.p_values = Eigen::VectorXd::Constant(5, 0.5);
    scan.p_values(2) = 1e-6;
    scan.betas = Eigen::VectorXd::Zero(5);
    scan.t_stats = Eigen::VectorXd::Zero(5);
    scan.bonferroni_threshold = 0.01;
    const ThresholdPower scan_power = threshold_power(scan, {0, 2});
    REQUIRE(scan_power.tpr == Catch::Approx(0.5));
    REQUIRE(scan_power.fpr == 0.0);
}

}  // namespace
}  // namespace rategp
