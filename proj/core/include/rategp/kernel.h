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

#ifndef RATEGP_KERNEL_H_
#define RATEGP_KERNEL_H_

#include <optional>

#include <Eigen/Core>

namespace rategp
{

// Covariance function over sample rows.
//
// Gaussian: k(x, x') = exp(-||x - x'||^2 / (2 theta^2)), with the bandwidth
// theta either given explicitly or filled in by the median heuristic at
// construction time.  Linear: K = X X^T / p, the usual gram matrix on a
// standardized design.  `jitter` is added to the diagonal after the kernel
// evaluation to keep downstream factorizations stable.
struct KernelSpec
{
    enum class Kind
    {
        Gaussian,
        Linear,
    };

    Kind kind = Kind::Gaussian;
    std::optional<double> bandwidth;  ///< Gaussian only; empty -> median heuristic.
    double jitter = 1e-6;
};

// Immutable n x n covariance matrix together with the spec that produced it
// (with any heuristic bandwidth resolved to its numeric value).
struct CovarianceMatrix
{
    Eigen::MatrixXd values;
    KernelSpec spec;

    auto n_samples() const -> Eigen::Index { return values.rows(); }
};

// Median of the n(n-1)/2 pairwise Euclidean distances between the rows of
// `x` (strict pairs only; self-distances excluded).  For an even pair count
// the two middle order statistics are averaged.
//
// Throws ArgumentError when n < 2 and DataError when the median distance is
// zero (a degenerate design where at least half of all row pairs coincide).
auto median_heuristic(const Eigen::MatrixXd& x) -> double;

// Builds the covariance matrix over the rows of `x` according to `spec`.
// The returned spec always carries the bandwidth that was actually used.
// Throws NumericalError if any kernel entry is non-finite.
auto build_covariance(const Eigen::MatrixXd& x, const KernelSpec& spec) -> CovarianceMatrix;

}  // namespace rategp

#endif  // RATEGP_KERNEL_H_
