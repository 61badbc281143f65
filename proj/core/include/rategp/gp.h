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

#ifndef RATEGP_GP_H_
#define RATEGP_GP_H_

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "rategp/kernel.h"

namespace rategp
{

// Settings for the two-block Gibbs sampler over (f, tau^2).
//
// The noise variance carries a scaled inverse chi-squared prior,
// tau^2 ~ Scale-Inv-chi^2(a, b), parameterized so that a draw is
// a * b / chisq_a and the prior mean is a * b / (a - 2).  Two conventions
// exist in the literature; this one is fixed here so the conditional update
// below is unambiguous.
struct GpConfig
{
    // How step (1), the multivariate-normal update of f, is carried out.
    //
    // EigenBasis diagonalizes K once and runs the chain in the eigenbasis
    // where every conditional is coordinate-wise; draws are rotated back at
    // the end.  PerIteration refactorizes K + tau^2 I on every sweep.  The
    // two produce draws from identical conditional distributions; EigenBasis
    // is the default because refactorization costs O(n^3) per iteration.
    enum class Solver
    {
        EigenBasis,
        PerIteration,
    };

    int n_iter = 10000;  ///< total sweeps, including burn-in
    int burn_in = 1000;  ///< discarded leading sweeps
    int thin = 1;        ///< keep every thin-th sweep after burn-in
    double a = 5.0;      ///< prior degrees of freedom
    double b = 0.4;      ///< prior scale
    std::uint64_t seed = 0;
    Solver solver = Solver::EigenBasis;

    // Diagnostic hook: hold tau^2 at this value and skip its update, turning
    // the chain into i.i.d. draws from f | tau^2, y.
    std::optional<double> fixed_tau2;

    // Number of retained draws implied by (n_iter, burn_in, thin).
    auto n_draws() const -> int { return (n_iter - burn_in) / thin; }
};

// Retained posterior draws.  Row t of f_draws is the latent function at the
// retained sweep t; tau2_draws(t) is the matching noise variance.
struct PosteriorDraws
{
    Eigen::MatrixXd f_draws;    ///< T x n
    Eigen::VectorXd tau2_draws; ///< T, all positive
    GpConfig config;

    auto n_draws() const -> Eigen::Index { return f_draws.rows(); }
    auto n_samples() const -> Eigen::Index { return f_draws.cols(); }
};

// Runs the Gibbs sampler, alternating
//   (1) f | tau^2, y ~ N(m*, V*), m* = K (K + tau^2 I)^-1 y,
//       V* = K - K (K + tau^2 I)^-1 K;
//   (2) tau^2 | f, y ~ Scale-Inv-chi^2(a*, b*), a* = a + n,
//       b* = (a b + (y - f)'(y - f)) / a*,
// with tau^2 initialized from its prior.
//
// Throws ArgumentError on invalid config or mismatched dimensions and
// NumericalError when a factorization fails after jitter escalation.
auto gibbs_fit(const Eigen::VectorXd& y, const CovarianceMatrix& k, const GpConfig& cfg)
    -> PosteriorDraws;

// Arithmetic mean of the retained f draws.
auto posterior_mean_f(const PosteriorDraws& draws) -> Eigen::VectorXd;

}  // namespace rategp

#endif  // RATEGP_GP_H_
