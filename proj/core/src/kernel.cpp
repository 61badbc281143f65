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

#include "rategp/kernel.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rategp/errors.h"

namespace rategp
{
namespace
{

// Squared Euclidean distances between all rows via the gram-matrix
// expansion ||x_i - x_j||^2 = ||x_i||^2 + ||x_j||^2 - 2 x_i' x_j,
// clamped at zero against cancellation.
Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x)
{
    const Eigen::VectorXd sq_norms = x.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * (x * x.transpose());
    d2.rowwise() += sq_norms.transpose();
    d2.colwise() += sq_norms;
    return d2.cwiseMax(0.0);
}

}  // namespace

auto median_heuristic(const Eigen::MatrixXd& x) -> double
{
    const Eigen::Index n = x.rows();
    if (n < 2)
    {
        throw ArgumentError("median heuristic requires at least 2 samples, got "
                            + std::to_string(n));
    }

    const Eigen::MatrixXd d2 = squared_distances(x);
    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = i + 1; j < n; ++j)
        {
            distances.push_back(std::sqrt(d2(i, j)));
        }
    }

    const std::size_t m = distances.size();
    const std::size_t mid = m / 2;
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                     distances.end());
    double median = distances[mid];
    if (m % 2 == 0)
    {
        // Even count: average with the next-lower order statistic, which is
        // the maximum of the left partition after nth_element.
        const double lower =
            *std::max_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (median + lower);
    }

    if (!(median > 0.0))
    {
        throw DataError("degenerate design: median pairwise distance is zero");
    }
    return median;
}

auto build_covariance(const Eigen::MatrixXd& x, const KernelSpec& spec) -> CovarianceMatrix
{
    if (spec.jitter < 0.0)
    {
        throw ArgumentError("kernel jitter must be non-negative");
    }

    CovarianceMatrix cov;
    cov.spec = spec;

    if (spec.kind == KernelSpec::Kind::Gaussian)
    {
        double theta = 0.0;
        if (spec.bandwidth)
        {
            theta = *spec.bandwidth;
            if (!(theta > 0.0))
            {
                throw ArgumentError("explicit kernel bandwidth must be positive");
            }
        }
        else
        {
            theta = median_heuristic(x);
        }
        cov.spec.bandwidth = theta;
        cov.values = (squared_distances(x) / (-2.0 * theta * theta)).array().exp();
    }
    else
    {
        if (x.cols() < 1)
        {
            throw ArgumentError("linear kernel requires at least one column");
        }
        cov.values = (x * x.transpose()) / static_cast<double>(x.cols());
    }

    // Kill the asymmetry noise a GEMM can introduce before anyone relies on
    // symmetric factorizations.
    cov.values = ((cov.values + cov.values.transpose()) * 0.5).eval();

    if (!cov.values.allFinite())
    {
        throw NumericalError("covariance matrix contains non-finite entries");
    }

    cov.values.diagonal().array() += spec.jitter;
    return cov;
}

}  // namespace rategp
