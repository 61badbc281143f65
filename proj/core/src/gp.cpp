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

#include "rategp/gp.h"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "rategp/errors.h"

namespace rategp
{
namespace
{

void validate(const Eigen::VectorXd& y, const CovarianceMatrix& k, const GpConfig& cfg)
{
    if (k.values.rows() != k.values.cols())
    {
        throw ArgumentError("covariance matrix must be square");
    }
    if (y.size() != k.values.rows())
    {
        throw ArgumentError("phenotype length " + std::to_string(y.size())
                            + " does not match covariance dimension "
                            + std::to_string(k.values.rows()));
    }
    if (!y.allFinite())
    {
        throw DataError("phenotype vector contains non-finite entries");
    }
    if (cfg.n_iter < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.n_iter)
    {
        throw ArgumentError("require 0 <= burn_in < n_iter");
    }
    if (cfg.thin < 1)
    {
        throw ArgumentError("thin must be >= 1");
    }
    if (cfg.n_draws() < 1)
    {
        throw ArgumentError("config retains no draws: (n_iter - burn_in) / thin < 1");
    }
    if (!(cfg.a > 0.0) || !(cfg.b > 0.0))
    {
        throw ArgumentError("prior hyper-parameters a and b must be positive");
    }
    if (cfg.fixed_tau2 && !(*cfg.fixed_tau2 > 0.0))
    {
        throw ArgumentError("fixed_tau2 must be positive");
    }
}

// Condition estimate from a Cholesky factor: (max diag(L) / min diag(L))^2.
double cholesky_condition_estimate(const Eigen::MatrixXd& l)
{
    const Eigen::VectorXd d = l.diagonal();
    const double lo = d.minCoeff();
    const double hi = d.maxCoeff();
    if (lo <= 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return (hi / lo) * (hi / lo);
}

// Cholesky with diagonal-jitter escalation over three decades; throws with
// diagnostics on persistent failure.
Eigen::LLT<Eigen::MatrixXd> factorize_spd(const Eigen::MatrixXd& a, double tau2,
                                          const char* label)
{
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success)
    {
        return llt;
    }

    const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
    double jitter = 1e-10 * scale;
    for (int decade = 0; decade <= 3; ++decade)
    {
        Eigen::MatrixXd bumped = a;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        if (llt.info() == Eigen::Success)
        {
            return llt;
        }
        jitter *= 10.0;
    }

    std::ostringstream msg;
    msg << label << " factorization failed after jitter escalation (tau^2 = " << tau2
        << ", diagonal range [" << a.diagonal().minCoeff() << ", " << a.diagonal().maxCoeff()
        << "])";
    throw NumericalError(msg.str());
}

class ScaledInvChiSq
{
public:
    ScaledInvChiSq(double dof, double scale) : dof_(dof), scale_(scale), chisq_(dof) {}

    double operator()(std::mt19937_64& rng) { return dof_ * scale_ / chisq_(rng); }

private:
    double dof_;
    double scale_;
    std::chi_squared_distribution<double> chisq_;
};

struct Retention
{
    const GpConfig& cfg;

    // Retained-draw slot for 1-based sweep index `iter`, or -1.
    int slot(int iter) const
    {
        const int offset = iter - cfg.burn_in;
        if (offset < 1 || offset % cfg.thin != 0)
        {
            return -1;
        }
        const int idx = offset / cfg.thin - 1;
        return idx < cfg.n_draws() ? idx : -1;
    }
};

PosteriorDraws run_eigen_basis(const Eigen::VectorXd& y, const CovarianceMatrix& k,
                               const GpConfig& cfg)
{
    const Eigen::Index n = y.size();
    const int n_draws = cfg.n_draws();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k.values);
    if (eig.info() != Eigen::Success)
    {
        throw NumericalError("eigendecomposition of the covariance matrix failed");
    }
    // K is PSD up to round-off; negative eigenvalues are noise.
    const Eigen::VectorXd d = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd& u = eig.eigenvectors();
    const Eigen::VectorXd y_rot = u.transpose() * y;

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ScaledInvChiSq prior_tau2(cfg.a, cfg.b);

    double tau2 = cfg.fixed_tau2 ? *cfg.fixed_tau2 : prior_tau2(rng);

    PosteriorDraws draws;
    draws.config = cfg;
    draws.config.solver = GpConfig::Solver::EigenBasis;
    Eigen::MatrixXd f_rot_draws(n_draws, n);
    draws.tau2_draws.resize(n_draws);

    const Retention retain{cfg};
    const double a_post = cfg.a + static_cast<double>(n);
    std::chi_squared_distribution<double> chisq_post(a_post);

    Eigen::VectorXd f_rot(n);
    for (int iter = 1; iter <= cfg.n_iter; ++iter)
    {
        // In the eigenbasis the conditional N(m*, V*) is coordinate-wise:
        // mean d_i y_i / (d_i + tau^2), variance d_i tau^2 / (d_i + tau^2).
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double denom = d(i) + tau2;
            const double mean = d(i) * y_rot(i) / denom;
            const double sd = std::sqrt(d(i) * tau2 / denom);
            f_rot(i) = mean + sd * normal(rng);
        }

        if (!cfg.fixed_tau2)
        {
            // ||y - f|| is rotation-invariant, so the residual sum of squares
            // can be taken in the eigenbasis.
            const double rss = (y_rot - f_rot).squaredNorm();
            const double b_post = (cfg.a * cfg.b + rss) / a_post;
            tau2 = a_post * b_post / chisq_post(rng);
        }

        const int slot = retain.slot(iter);
        if (slot >= 0)
        {
            f_rot_draws.row(slot) = f_rot.transpose();
            draws.tau2_draws(slot) = tau2;
        }
    }

    draws.f_draws.noalias() = f_rot_draws * u.transpose();
    if (!draws.f_draws.allFinite())
    {
        throw NumericalError("posterior draws contain non-finite entries");
    }
    return draws;
}

PosteriorDraws run_per_iteration(const Eigen::VectorXd& y, const CovarianceMatrix& k,
                                 const GpConfig& cfg)
{
    const Eigen::Index n = y.size();
    const int n_draws = cfg.n_draws();

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ScaledInvChiSq prior_tau2(cfg.a, cfg.b);

    double tau2 = cfg.fixed_tau2 ? *cfg.fixed_tau2 : prior_tau2(rng);

    PosteriorDraws draws;
    draws.config = cfg;
    draws.f_draws.resize(n_draws, n);
    draws.tau2_draws.resize(n_draws);

    const Retention retain{cfg};
    const double a_post = cfg.a + static_cast<double>(n);
    std::chi_squared_distribution<double> chisq_post(a_post);

    Eigen::VectorXd f(n);
    Eigen::VectorXd z(n);
    for (int iter = 1; iter <= cfg.n_iter; ++iter)
    {
        Eigen::MatrixXd shifted = k.values;
        shifted.diagonal().array() += tau2;
        const Eigen::LLT<Eigen::MatrixXd> llt = factorize_spd(shifted, tau2, "K + tau^2 I");
        if (cholesky_condition_estimate(llt.matrixL()) == std::numeric_limits<double>::infinity())
        {
            throw NumericalError("K + tau^2 I factorization produced a zero pivot (tau^2 = "
                                 + std::to_string(tau2) + ")");
        }

        const Eigen::VectorXd mean = k.values * llt.solve(y);
        Eigen::MatrixXd cov = k.values - k.values * llt.solve(k.values);
        cov = ((cov + cov.transpose()) * 0.5).eval();
        const Eigen::LLT<Eigen::MatrixXd> cov_llt = factorize_spd(cov, tau2, "V*");

        for (Eigen::Index i = 0; i < n; ++i)
        {
            z(i) = normal(rng);
        }
        f = mean + cov_llt.matrixL() * z;

        if (!cfg.fixed_tau2)
        {
            const double rss = (y - f).squaredNorm();
            const double b_post = (cfg.a * cfg.b + rss) / a_post;
            tau2 = a_post * b_post / chisq_post(rng);
        }

        const int slot = retain.slot(iter);
        if (slot >= 0)
        {
            draws.f_draws.row(slot) = f.transpose();
            draws.tau2_draws(slot) = tau2;
        }
    }

    if (!draws.f_draws.allFinite())
    {
        throw NumericalError("posterior draws contain non-finite entries");
    }
    return draws;
}

}  // namespace

auto gibbs_fit(const Eigen::VectorXd& y, const CovarianceMatrix& k, const GpConfig& cfg)
    -> PosteriorDraws
{
    validate(y, k, cfg);
    return cfg.solver == GpConfig::Solver::EigenBasis ? run_eigen_basis(y, k, cfg)
                                                      : run_per_iteration(y, k, cfg);
}

auto posterior_mean_f(const PosteriorDraws& draws) -> Eigen::VectorXd
{
    if (draws.n_draws() < 1)
    {
        throw ArgumentError("posterior_mean_f requires at least one draw");
    }
    return draws.f_draws.colwise().mean();
}

}  // namespace rategp
