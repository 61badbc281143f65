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

#ifndef RATEGP_PROJECTION_H_
#define RATEGP_PROJECTION_H_

#include <Eigen/Core>

#include "rategp/gp.h"

namespace rategp
{

// Default relative singular-value cutoff for pseudoinverses and the default
// ridge added to the draw covariance, surfaced here because both are part of
// the reproducibility contract (they are also CLI flags).
inline constexpr double kDefaultSvCutoff = 1e-10;
inline constexpr double kDefaultCovarianceRidge = 1e-6;

// A Moore-Penrose pseudoinverse together with the numerical rank retained by
// the relative singular-value cutoff.
struct Pseudoinverse
{
    Eigen::MatrixXd matrix;
    Eigen::Index rank = 0;
};

// Gaussian summary of the projected effect-size draws: mean, covariance, and
// the covariance's pseudoinverse as the precision matrix.
struct EffectSizePosterior
{
    Eigen::VectorXd mu;      ///< p, column means of the projected draws
    Eigen::MatrixXd sigma;   ///< p x p, ridge-stabilized sample covariance
    Eigen::MatrixXd lambda;  ///< p x p, symmetric pseudoinverse of sigma
    Eigen::Index rank_sigma = 0;
    Eigen::Index n_draws = 0;

    auto n_variables() const -> Eigen::Index { return mu.size(); }
};

// SVD-based Moore-Penrose pseudoinverse of an arbitrary matrix.  Singular
// values below tol * sigma_max are treated as zero.
// Throws NumericalError on SVD failure and DataError on non-finite input.
auto pseudoinverse(const Eigen::MatrixXd& x, double tol = kDefaultSvCutoff) -> Pseudoinverse;

// Pseudoinverse of a symmetric matrix via its eigendecomposition, inverting
// eigenvalues whose magnitude exceeds tol * max |eigenvalue|.  The result is
// exactly symmetric.
auto symmetric_pseudoinverse(const Eigen::MatrixXd& a, double tol = kDefaultSvCutoff)
    -> Pseudoinverse;

// Maps every retained draw of the latent function through the design
// pseudoinverse: row t of the result is X^+ f_t.  Returns a T x p matrix.
auto project_draws(const Eigen::MatrixXd& x, const PosteriorDraws& draws,
                   double tol = kDefaultSvCutoff) -> Eigen::MatrixXd;

// Summarizes projected draws (T x p) into (mu, Sigma, Lambda):
//   mu     = column means,
//   Sigma  = unbiased sample covariance (divisor T - 1)
//            + ridge * mean(diag) * I   (scale falls back to 1 when the
//            sample covariance is exactly zero),
//   Lambda = symmetric pseudoinverse of the stabilized Sigma.
// Throws ArgumentError when T < 2, or when T <= p with ridge = 0 (the
// sample covariance is then singular by construction and needs
// stabilization).
auto summarize_posterior(const Eigen::MatrixXd& beta_draws,
                         double ridge = kDefaultCovarianceRidge,
                         double tol = kDefaultSvCutoff) -> EffectSizePosterior;

}  // namespace rategp

#endif  // RATEGP_PROJECTION_H_
