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
#include <limits>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "rategp/errors.h"
#include "rategp/gp.h"
#include "rategp/kernel.h"
#include "support/test_util.h"

namespace rategp
{
namespace
{

struct SmallProblem
{
    Eigen::VectorXd y;
    CovarianceMatrix k;
};

SmallProblem make_problem(Eigen::Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd x = testing::random_matrix(n, 4, rng);
    KernelSpec spec;
    spec.jitter = 1e-6;
    SmallProblem problem;
    problem.k = build_covariance(x, spec);
    problem.y = testing::random_vector(n, rng)
                + problem.k.values.leftCols<1>() * 2.0;  // correlate y with the kernel
    return problem;
}

TEST_CASE("fixed-noise draws average to the analytic conditional mean")
{
    const SmallProblem problem = make_problem(30, 101);
    const Eigen::Index n = problem.y.size();
    const double tau2 = 0.7;

    GpConfig cfg;
    cfg.n_iter = 42000;
    cfg.burn_in = 2000;
    cfg.seed = 5;
    cfg.fixed_tau2 = tau2;
    const PosteriorDraws draws = gibbs_fit(problem.y, problem.k, cfg);
    REQUIRE(draws.n_draws() == 40000);
    REQUIRE((draws.tau2_draws.array() == tau2).all());

    // Textbook conditional: m* = K (K + tau^2 I)^-1 y,
    // V* = K - K (K + tau^2 I)^-1 K, computed here by direct solves.
    const Eigen::MatrixXd k = problem.k.values;
    const Eigen::MatrixXd noisy = k + tau2 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::LLT<Eigen::MatrixXd> llt(noisy);
    const Eigen::VectorXd m_star = k * llt.solve(problem.y);
    const Eigen::MatrixXd v_star = k - k * llt.solve(k);

    const Eigen::VectorXd mean = posterior_mean_f(draws);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double se = std::sqrt(v_star(i, i) / static_cast<double>(draws.n_draws()));
        CAPTURE(i, m_star(i), mean(i), se);
        REQUIRE(std::abs(mean(i) - m_star(i)) <= 5.0 * se + 1e-12);
    }

    // Empirical covariance of the draws approaches V*.
    const Eigen::MatrixXd centered = draws.f_draws.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(draws.n_draws() - 1);
    REQUIRE((cov - v_star).norm() / v_star.norm() < 0.05);
}

TEST_CASE("noise-variance draws match a quadrature oracle for the marginal posterior")
{
    const SmallProblem problem = make_problem(25, 202);
    GpConfig cfg;
    cfg.n_iter = 60000;
    cfg.burn_in = 2000;
    cfg.seed = 7;
    const PosteriorDraws draws = gibbs_fit(problem.y, problem.k, cfg);

    // Independent oracle: with f integrated out, y | tau^2 ~ N(0, K + tau^2 I),
    // so p(tau^2 | y) ∝ N(y; 0, K + tau^2 I) * ScaleInvChi2(tau^2; a, b).
    // E[tau^2 | y] then comes from one-dimensional quadrature in the
    // eigenbasis of K, touching none of the sampler's code paths.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(problem.k.values);
    const Eigen::VectorXd d = eig.eigenvalues();
    const Eigen::VectorXd y_rot = eig.eigenvectors().transpose() * problem.y;

    const auto log_weight = [&](double tau2)
    {
        double log_lik = 0.0;
        for (Eigen::Index i = 0; i < d.size(); ++i)
        {
            const double v = d(i) + tau2;
            log_lik += -0.5 * (std::log(v) + y_rot(i) * y_rot(i) / v);
        }
        const double log_prior =
            (-cfg.a / 2.0 - 1.0) * std::log(tau2) - cfg.a * cfg.b / (2.0 * tau2);
        return log_lik + log_prior;
    };

    const int grid = 40000;
    const double lo = std::log(1e-4);
    const double hi = std::log(50.0);
    double num = 0.0;
    double den = 0.0;
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(grid);
    for (int i = 0; i < grid; ++i)
    {
        const double t = std::exp(lo + (hi - lo) * (i + 0.5) / grid);
        logs[i] = log_weight(t) + std::log(t);  // log-measure for the log grid
        max_log = std::max(max_log, logs[i]);
    }
    for (int i = 0; i < grid; ++i)
    {
        const double t = std::exp(lo + (hi - lo) * (i + 0.5) / grid);
        const double w = std::exp(logs[i] - max_log);
        num += w * t;
        den += w;
    }
    const double oracle_mean = num / den;

    const double chain_mean = draws.tau2_draws.mean();
    CAPTURE(oracle_mean, chain_mean);
    REQUIRE(chain_mean == Catch::Approx(oracle_mean).epsilon(0.05));
    REQUIRE(draws.tau2_draws.minCoeff() > 0.0);
}

TEST_CASE("both solver backends draw from the same distribution")
{
    const SmallProblem problem = make_problem(20, 303);
    GpConfig cfg;
    cfg.n_iter = 24000;
    cfg.burn_in = 4000;
    cfg.seed = 11;
    cfg.solver = GpConfig::Solver::EigenBasis;
    const PosteriorDraws eigen_draws = gibbs_fit(problem.y, problem.k, cfg);

    cfg.solver = GpConfig::Solver::PerIteration;
    cfg.seed = 12;
    const PosteriorDraws periter_draws = gibbs_fit(problem.y, problem.k, cfg);

    const Eigen::VectorXd m1 = posterior_mean_f(eigen_draws);
    const Eigen::VectorXd m2 = posterior_mean_f(periter_draws);
    REQUIRE((m1 - m2).cwiseAbs().maxCoeff() < 0.05);
    REQUIRE(eigen_draws.tau2_draws.mean()
            == Catch::Approx(periter_draws.tau2_draws.mean()).epsilon(0.1));

    const auto sd = [](const Eigen::MatrixXd& m, Eigen::Index col)
    {
        const Eigen::VectorXd c = m.col(col);
        return std::sqrt((c.array() - c.mean()).square().sum() / (c.size() - 1.0));
    };
    for (const Eigen::Index col : {Eigen::Index{0}, Eigen::Index{10}, Eigen::Index{19}})
    {
        REQUIRE(sd(eigen_draws.f_draws, col)
                == Catch::Approx(sd(periter_draws.f_draws, col)).epsilon(0.15).margin(0.01));
    }
}

TEST_CASE("retention follows burn-in and thinning exactly")
{
    const SmallProblem problem = make_problem(8, 404);
    GpConfig cfg;
    cfg.n_iter = 16;
    cfg.burn_in = 4;
    cfg.thin = 3;
    cfg.seed = 2;
    REQUIRE(cfg.n_draws() == 4);
    const PosteriorDraws draws = gibbs_fit(problem.y, problem.k, cfg);
    REQUIRE(draws.n_draws() == 4);
    REQUIRE(draws.n_samples() == 8);
    REQUIRE(draws.tau2_draws.size() == 4);
}

TEST_CASE("chains are reproducible by seed")
{
    const SmallProblem problem = make_problem(10, 505);
    GpConfig cfg;
    cfg.n_iter = 200;
    cfg.burn_in = 50;
    cfg.seed = 99;
    const PosteriorDraws d1 = gibbs_fit(problem.y, problem.k, cfg);
    const PosteriorDraws d2 = gibbs_fit(problem.y, problem.k, cfg);
    REQUIRE((d1.f_draws.array() == d2.f_draws.array()).all());
    REQUIRE((d1.tau2_draws.array() == d2.tau2_draws.array()).all());

    cfg.seed = 100;
    const PosteriorDraws d3 = gibbs_fit(problem.y, problem.k, cfg);
    REQUIRE_FALSE((d1.f_draws.array() == d3.f_draws.array()).all());
}

TEST_CASE("invalid configurations are rejected")
{
    const SmallProblem problem = make_problem(6, 606);
    GpConfig cfg;

    GpConfig bad = cfg;
    bad.burn_in = bad.n_iter;
    REQUIRE_THROWS_AS(gibbs_fit(problem.y, problem.k, bad), ArgumentError);

    bad = cfg;
    bad.thin = 0;
    REQUIRE_THROWS_AS(gibbs_fit(problem.y, problem.k, bad), ArgumentError);

    bad = cfg;
    bad.a = 0.0;
    REQUIRE_THROWS_AS(gibbs_fit(problem.y, problem.k, bad), ArgumentError);

    bad = cfg;
    bad.fixed_tau2 = -1.0;
    REQUIRE_THROWS_AS(gibbs_fit(problem.y, problem.k, bad), ArgumentError);

    Eigen::VectorXd short_y = problem.y.head(3);
    REQUIRE_THROWS_AS(gibbs_fit(short_y, problem.k, cfg), ArgumentError);
}

}  // namespace
}  // namespace rategp
