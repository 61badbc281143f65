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

#include "rategp/errors.h"
#include "rategp/kernel.h"
#include "support/test_util.h"

namespace rategp
{
namespace
{

// Oracle: median of pairwise distances by materializing all n(n-1)/2 of
// them and sorting. Even counts average the two middle order statistics.
double median_distance_oracle(const Eigen::MatrixXd& x)
{
    std::vector<double> distances;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
    {
        for (Eigen::Index j = i + 1; j < x.rows(); ++j)
        {
            distances.push_back((x.row(i) - x.row(j)).norm());
        }
    }
    std::sort(distances.begin(), distances.end());
    const std::size_t m = distances.size();
    if (m % 2 == 1)
    {
        return distances[m / 2];
    }
    return 0.5 * (distances[m / 2 - 1] + distances[m / 2]);
}

TEST_CASE("median heuristic matches a brute-force oracle")
{
    std::mt19937_64 rng(17);
    // n chosen so the pair count covers both parities.
    for (const Eigen::Index n : {4, 5, 8, 9, 30, 31})
    {
        const Eigen::MatrixXd x = testing::random_matrix(n, 6, rng);
        CAPTURE(n);
        REQUIRE(median_heuristic(x) == Catch::Approx(median_distance_oracle(x)).epsilon(1e-12));
    }
}

TEST_CASE("median heuristic rejects degenerate designs")
{
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 3);  // all rows identical
    REQUIRE_THROWS_AS(median_heuristic(x), DataError);
    REQUIRE_THROWS_AS(median_heuristic(Eigen::MatrixXd::Zero(1, 3)), ArgumentError);
}

TEST_CASE("gaussian covariance entries match the kernel formula")
{
    std::mt19937_64 rng(18);
    const Eigen::MatrixXd x = testing::random_matrix(12, 4, rng);
    KernelSpec spec;
    spec.bandwidth = 1.7;
    spec.jitter = 1e-6;
    const CovarianceMatrix k = build_covariance(x, spec);

    for (Eigen::Index i = 0; i < x.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < x.rows(); ++j)
        {
            const double d2 = (x.row(i) - x.row(j)).squaredNorm();
            double expected = std::exp(-d2 / (2.0 * 1.7 * 1.7));
            if (i == j)
            {
                expected += 1e-6;
            }
            REQUIRE(k.values(i, j) == Catch::Approx(expected).margin(1e-14));
        }
    }
}

TEST_CASE("gaussian covariance is symmetric, unit-diagonal, and positive semidefinite")
{
    std::mt19937_64 rng(19);
    const Eigen::MatrixXd x = testing::random_matrix(40, 8, rng);
    KernelSpec spec;  // median-heuristic bandwidth
    spec.jitter = 1e-6;
    const CovarianceMatrix k = build_covariance(x, spec);

    REQUIRE((k.values - k.values.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for (Eigen::Index i = 0; i < k.n_samples(); ++i)
    {
        REQUIRE(k.values(i, i) == Catch::Approx(1.0 + 1e-6).margin(1e-12));
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.values);
    REQUIRE(eig.eigenvalues().minCoeff() >= 1e-6 - 1e-12);
    REQUIRE(k.spec.bandwidth.has_value());
    REQUIRE(*k.spec.bandwidth == Catch::Approx(median_distance_oracle(x)).epsilon(1e-12));
}

TEST_CASE("linear covariance equals the scaled gram matrix")
{
    std::mt19937_64 rng(20);
    const Eigen::MatrixXd x = testing::random_matrix(15, 7, rng);
    KernelSpec spec;
    spec.kind = KernelSpec::Kind::Linear;
    spec.jitter = 1e-8;
    const CovarianceMatrix k = build_covariance(x, spec);

    const Eigen::MatrixXd expected =
        x * x.transpose() / 7.0 + 1e-8 * Eigen::MatrixXd::Identity(15, 15);
    REQUIRE((k.values - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("explicit bandwidth overrides the heuristic")
{
    std::mt19937_64 rng(21);
    const Eigen::MatrixXd x = testing::random_matrix(10, 3, rng);
    KernelSpec wide;
    wide.bandwidth = 100.0;
    const CovarianceMatrix k = build_covariance(x, wide);
    // A huge bandwidth drives every entry toward 1.
    REQUIRE(k.values.minCoeff() >= 0.99);
    REQUIRE(*k.spec.bandwidth == 100.0);

    KernelSpec bad;
    bad.bandwidth = 0.0;
    REQUIRE_THROWS_AS(build_covariance(x, bad), ArgumentError);
    KernelSpec negative_jitter;
    negative_jitter.jitter = -1e-9;
    REQUIRE_THROWS_AS(build_covariance(x, negative_jitter), ArgumentError);
}

}  // namespace
}  // namespace rategp
