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

#include "rategp/projection.h"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "rategp/errors.h"

namespace rategp
{

auto pseudoinverse(const Eigen::MatrixXd& x, double tol) -> Pseudoinverse
{
    if (!x.allFinite())
    {
        throw DataError("pseudoinverse input contains non-finite entries");
    }
    if (!(tol >= 0.0))
    {
        throw ArgumentError("singular-value cutoff must be non-negative");
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
    {
        throw NumericalError("SVD did not converge while computing a pseudoinverse");
    }

    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;

    Pseudoinverse result;
    Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
    {
        if (sv(i) > cutoff && sv(i) > 0.0)
        {
            inv_sv(i) = 1.0 / sv(i);
            ++result.rank;
        }
    }
    result.matrix.noalias() = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
    return result;
}

auto symmetric_pseudoinverse(const Eigen::MatrixXd& a, double tol) -> Pseudoinverse
{
    if (a.rows() != a.cols())
    {
        throw ArgumentError("symmetric_pseudoinverse requires a square matrix");
    }
    if (!a.allFinite())
    {
        throw DataError("symmetric_pseudoinverse input contains non-finite entries");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success)
    {
        throw NumericalError("eigendecomposition failed in symmetric_pseudoinverse");
    }

    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double cutoff = tol * ev.cwiseAbs().maxCoeff();

    Pseudoinverse result;
    Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
        if (std::abs(ev(i)) > cutoff && ev(i) != 0.0)
        {
            inv_ev(i) = 1.0 / ev(i);
            ++result.rank;
        }
    }
    result.matrix.noalias() =
        eig.eigenvectors() * inv_ev.asDiagonal() * eig.eigenvectors().transpose();
    result.matrix = ((result.matrix + result.matrix.transpose()) * 0.5).eval();
    return result;
}

auto project_draws(const Eigen::MatrixXd& x, const PosteriorDraws& draws, double tol)
    -> Eigen::MatrixXd
{
    if (draws.n_samples() != x.rows())
    {
        throw ArgumentError("draw dimension " + std::to_string(draws.n_samples())
                            + " does not match design rows " + std::to_string(x.rows()));
    }
    const Pseudoinverse pinv = pseudoinverse(x, tol);
    // Row t of the result is X^+ f_t, i.e. F (X^+)'.
    return draws.f_draws * pinv.matrix.transpose();
}

auto summarize_posterior(const Eigen::MatrixXd& beta_draws, double ridge, double tol)
    -> EffectSizePosterior
{
    const Eigen::Index t = beta_draws.rows();
    const Eigen::Index p = beta_draws.cols();
    if (t < 2)
    {
        throw ArgumentError("summarize_posterior requires at least 2 draws");
    }
    if (!(ridge >= 0.0))
    {
        throw ArgumentError("covariance ridge must be non-negative");
    }
    if (t <= p && ridge == 0.0)
    {
        throw ArgumentError("with " + std::to_string(t) + " draws over " + std::to_string(p)
                            + " variables the sample covariance is singular; "
                              "a positive ridge is required");
    }
    if (!beta_draws.allFinite())
    {
        throw DataError("projected draws contain non-finite entries");
    }

    EffectSizePosterior post;
    post.n_draws = t;
    post.mu = beta_draws.colwise().mean();

    const Eigen::MatrixXd centered = beta_draws.rowwise() - post.mu.transpose();
    post.sigma.noalias() = centered.transpose() * centered / static_cast<double>(t - 1);
    post.sigma = ((post.sigma + post.sigma.transpose()) * 0.5).eval();

    if (ridge > 0.0)
    {
        const double diag_mean = post.sigma.diagonal().mean();
        const double scale = diag_mean > 0.0 ? diag_mean : 1.0;
        post.sigma.diagonal().array() += ridge * scale;
    }

    const Pseudoinverse lambda = symmetric_pseudoinverse(post.sigma, tol);
    post.lambda = lambda.matrix;
    post.rank_sigma = lambda.rank;
    return post;
}

}  // namespace rategp
