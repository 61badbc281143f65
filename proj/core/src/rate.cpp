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

#include "rategp/rate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "rategp/errors.h"
#include "rategp/threads.h"

namespace rategp
{
namespace
{

constexpr double kSingularCutoff = 1e-12;

// Local coordinate of an original variable index, or an error if the
// variable has already been nullified / never existed.
Eigen::Index local_position(const ConditionedPosterior& post, Eigen::Index variable)
{
    const auto it = std::find(post.variables.begin(), post.variables.end(), variable);
    if (it == post.variables.end())
    {
        throw ArgumentError("variable " + std::to_string(variable)
                            + " is not in play in this posterior");
    }
    return static_cast<Eigen::Index>(it - post.variables.begin());
}

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, Eigen::Index j)
{
    const Eigen::Index p = m.rows();
    Eigen::MatrixXd out(p - 1, p - 1);
    out.topLeftCorner(j, j) = m.topLeftCorner(j, j);
    out.topRightCorner(j, p - j - 1) = m.topRightCorner(j, p - j - 1);
    out.bottomLeftCorner(p - j - 1, j) = m.bottomLeftCorner(p - j - 1, j);
    out.bottomRightCorner(p - j - 1, p - j - 1) = m.bottomRightCorner(p - j - 1, p - j - 1);
    return out;
}

Eigen::VectorXd drop_entry(const Eigen::VectorXd& v, Eigen::Index j)
{
    const Eigen::Index p = v.size();
    Eigen::VectorXd out(p - 1);
    out.head(j) = v.head(j);
    out.tail(p - j - 1) = v.tail(p - j - 1);
    return out;
}

// The variable-deleted pieces entering the closed form.
struct Partition
{
    Eigen::MatrixXd sigma_sub;   // Sigma with row/col j removed
    Eigen::MatrixXd lambda_sub;  // Lambda with row/col j removed
    Eigen::VectorXd lambda_col;  // column j of Lambda, entry j removed
    double mu_j = 0.0;
    Eigen::VectorXd mu_sub;
};

Partition make_partition(const ConditionedPosterior& post, Eigen::Index local)
{
    Partition part;
    part.sigma_sub = drop_row_col(post.sigma, local);
    part.lambda_sub = drop_row_col(post.lambda, local);
    part.lambda_col = drop_entry(post.lambda.col(local), local);
    part.mu_j = post.mu(local);
    part.mu_sub = drop_entry(post.mu, local);
    return part;
}

// alpha_j = lambda_col' * lambda_sub^-1 * lambda_col by one symmetric solve;
// falls back to the pseudoinverse when the submatrix is numerically
// singular.
double alpha_from_partition(const Partition& part)
{
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(part.lambda_sub);
    const double d_max = ldlt.vectorD().cwiseAbs().maxCoeff();
    const bool usable = ldlt.info() == Eigen::Success && ldlt.isPositive()
                        && ldlt.vectorD().minCoeff() > kSingularCutoff * d_max;
    if (usable)
    {
        return part.lambda_col.dot(ldlt.solve(part.lambda_col));
    }
    const Pseudoinverse pinv = symmetric_pseudoinverse(part.lambda_sub, kSingularCutoff);
    return part.lambda_col.dot(pinv.matrix * part.lambda_col);
}

// log|sigma_sub| + log|lambda_sub| and tr(sigma_sub * lambda_sub), with a
// spectral-truncation fallback when either submatrix is numerically
// singular: eigenvalues below 1e-12 of the largest magnitude are dropped
// from both log-determinants and the trace is taken over the truncated
// reconstructions.
struct ProductTerms
{
    double log_det_product = 0.0;
    double trace = 0.0;
};

ProductTerms product_terms(const Partition& part)
{
    const auto try_ldlt = [](const Eigen::MatrixXd& m, double& log_det) -> bool
    {
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        {
            return false;
        }
        const Eigen::VectorXd d = ldlt.vectorD();
        if (d.minCoeff() <= kSingularCutoff * d.cwiseAbs().maxCoeff())
        {
            return false;
        }
        log_det = d.array().log().sum();
        return true;
    };

    ProductTerms terms;
    double log_det_sigma = 0.0;
    double log_det_lambda = 0.0;
    if (try_ldlt(part.sigma_sub, log_det_sigma) && try_ldlt(part.lambda_sub, log_det_lambda))
    {
        terms.log_det_product = log_det_sigma + log_det_lambda;
        // Both factors symmetric, so tr(S L) = sum_ij S_ij L_ij.
        terms.trace = part.sigma_sub.cwiseProduct(part.lambda_sub).sum();
        return terms;
    }

    const auto truncate = [](const Eigen::MatrixXd& m, double& log_det) -> Eigen::MatrixXd
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
        if (eig.info() != Eigen::Success)
        {
            throw NumericalError("eigendecomposition failed in KLD evaluation");
        }
        const Eigen::VectorXd& ev = eig.eigenvalues();
        const double cutoff = kSingularCutoff * ev.cwiseAbs().maxCoeff();
        Eigen::VectorXd kept = Eigen::VectorXd::Zero(ev.size());
        log_det = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
        {
            if (ev(i) > cutoff)
            {
                kept(i) = ev(i);
                log_det += std::log(ev(i));
            }
        }
        return eig.eigenvectors() * kept.asDiagonal() * eig.eigenvectors().transpose();
    };

    const Eigen::MatrixXd sigma_trunc = truncate(part.sigma_sub, log_det_sigma);
    const Eigen::MatrixXd lambda_trunc = truncate(part.lambda_sub, log_det_lambda);
    terms.log_det_product = log_det_sigma + log_det_lambda;
    terms.trace = sigma_trunc.cwiseProduct(lambda_trunc).sum();
    return terms;
}

double kld_from_partition(const Partition& part, Eigen::Index p_effective)
{
    const ProductTerms terms = product_terms(part);
    const double a = alpha_from_partition(part);
    const double kld = 0.5
                       * (-terms.log_det_product + terms.trace + 1.0
                          - static_cast<double>(p_effective) + a * part.mu_j * part.mu_j);
    if (!std::isfinite(kld))
    {
        std::ostringstream msg;
        msg << "closed-form KLD is non-finite (log-det " << terms.log_det_product << ", trace "
            << terms.trace << ", alpha " << a << ")";
        throw NumericalError(msg.str());
    }
    return kld;
}

void require_in_play(const ConditionedPosterior& post)
{
    if (post.p_effective() < 2)
    {
        throw ArgumentError("centrality requires at least 2 variables in play, have "
                            + std::to_string(post.p_effective()));
    }
}

}  // namespace

auto as_conditioned(const EffectSizePosterior& post) -> ConditionedPosterior
{
    if (post.mu.size() != post.sigma.rows() || post.sigma.rows() != post.sigma.cols()
        || post.lambda.rows() != post.sigma.rows() || post.lambda.cols() != post.sigma.cols())
    {
        throw ArgumentError("inconsistent posterior dimensions");
    }
    ConditionedPosterior state;
    state.mu = post.mu;
    state.sigma = post.sigma;
    state.lambda = post.lambda;
    state.variables.resize(static_cast<std::size_t>(post.mu.size()));
    std::iota(state.variables.begin(), state.variables.end(), Eigen::Index{0});
    return state;
}

auto kld_at_zero(const ConditionedPosterior& post, Eigen::Index variable) -> double
{
    require_in_play(post);
    const Eigen::Index local = local_position(post, variable);
    return kld_from_partition(make_partition(post, local), post.p_effective());
}

auto alpha(const ConditionedPosterior& post, Eigen::Index variable) -> double
{
    require_in_play(post);
    const Eigen::Index local = local_position(post, variable);
    return alpha_from_partition(make_partition(post, local));
}

auto compute_rates(const ConditionedPosterior& post) -> CentralityReport
{
    require_in_play(post);
    const Eigen::Index p_eff = post.p_effective();

    CentralityReport report;
    report.variables = post.variables;
    report.nullified = post.nullified;
    report.p_effective = p_eff;
    report.kld.resize(p_eff);

    parallel_for(p_eff,
                 [&](std::int64_t i)
                 {
                     const auto local = static_cast<Eigen::Index>(i);
                     report.kld(local) =
                         kld_from_partition(make_partition(post, local), p_eff);
                 });

    for (Eigen::Index i = 0; i < p_eff; ++i)
    {
        if (report.kld(i) < 0.0)
        {
            report.kld(i) = 0.0;
            ++report.clamped_count;
        }
    }
    if (report.clamped_count > 0
        && static_cast<double>(report.clamped_count) > 0.05 * static_cast<double>(p_eff))
    {
        report.notes.push_back("quality warning: " + std::to_string(report.clamped_count)
                               + " of " + std::to_string(p_eff)
                               + " KLD values were negative and clamped to zero");
    }

    const double total = report.kld.sum();
    const double uniform = 1.0 / static_cast<double>(p_eff);
    if (total <= 0.0)
    {
        report.no_signal = true;
        report.notes.emplace_back("no centrality signal: all KLD values are zero; "
                                  "rates reported uniform");
        report.rate = Eigen::VectorXd::Constant(p_eff, uniform);
        report.delta = 0.0;
        report.ess = 100.0;
        report.significant.assign(static_cast<std::size_t>(p_eff), false);
        return report;
    }

    report.rate = report.kld / total;
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < p_eff; ++i)
    {
        const double r = report.rate(i);
        if (r > 0.0)
        {
            entropy -= r * std::log(r);
        }
    }
    report.delta = std::max(0.0, std::log(static_cast<double>(p_eff)) - entropy);
    report.ess = 100.0 / (1.0 + report.delta);
    report.significant.resize(static_cast<std::size_t>(p_eff));
    for (Eigen::Index i = 0; i < p_eff; ++i)
    {
        report.significant[static_cast<std::size_t>(i)] = report.rate(i) > uniform;
    }
    return report;
}

auto compute_rates(const EffectSizePosterior& post) -> CentralityReport
{
    return compute_rates(as_conditioned(post));
}

auto nullify_and_condition(const ConditionedPosterior& post, Eigen::Index variable)
    -> ConditionedPosterior
{
    require_in_play(post);
    const Eigen::Index local = local_position(post, variable);
    const Partition part = make_partition(post, local);

    // theta_j = -L^-1 l_j, by the same solve-or-pseudoinverse rule as alpha.
    Eigen::VectorXd theta;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(part.lambda_sub);
    const double d_max = ldlt.vectorD().cwiseAbs().maxCoeff();
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()
        && ldlt.vectorD().minCoeff() > kSingularCutoff * d_max)
    {
        theta = -ldlt.solve(part.lambda_col);
    }
    else
    {
        const Pseudoinverse pinv = symmetric_pseudoinverse(part.lambda_sub, kSingularCutoff);
        theta = -(pinv.matrix * part.lambda_col);
    }

    ConditionedPosterior next;
    next.mu = part.mu_sub + theta * (0.0 - part.mu_j);
    next.lambda = part.lambda_sub;
    next.sigma = symmetric_pseudoinverse(part.lambda_sub).matrix;
    next.variables = post.variables;
    next.variables.erase(next.variables.begin() + static_cast<std::ptrdiff_t>(local));
    next.nullified = post.nullified;
    next.nullified.push_back(variable);
    return next;
}

namespace
{

// Argmax of rate with ties broken toward the lowest original index; appends
// a note when a tie was actually broken.
Eigen::Index argmax_variable(CentralityReport& report)
{
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < report.rate.size(); ++i)
    {
        if (report.rate(i) > report.rate(best))
        {
            best = i;
        }
    }
    for (Eigen::Index i = 0; i < report.rate.size(); ++i)
    {
        if (i != best && report.rate(i) == report.rate(best)
            && report.variables[static_cast<std::size_t>(i)]
                   < report.variables[static_cast<std::size_t>(best)])
        {
            best = i;
        }
    }
    for (Eigen::Index i = 0; i < report.rate.size(); ++i)
    {
        if (i != best && report.rate(i) == report.rate(best))
        {
            report.notes.push_back(
                "argmax tie broken toward variable "
                + std::to_string(report.variables[static_cast<std::size_t>(best)]));
            break;
        }
    }
    return report.variables[static_cast<std::size_t>(best)];
}

}  // namespace

auto centrality_cascade(const ConditionedPosterior& post, int max_steps, double delta_stop)
    -> std::vector<CentralityReport>
{
    require_in_play(post);
    if (max_steps < 0 || max_steps > post.p_effective() - 2)
    {
        throw ArgumentError("max_steps must lie in [0, p_effective - 2]");
    }

    std::vector<CentralityReport> reports;
    if (max_steps == 0)
    {
        return reports;
    }

    ConditionedPosterior current = post;
    CentralityReport ranking = compute_rates(current);
    for (int step = 0; step < max_steps; ++step)
    {
        const Eigen::Index target = argmax_variable(ranking);
        current = nullify_and_condition(current, target);
        ranking = compute_rates(current);
        reports.push_back(ranking);
        if (ranking.delta < delta_stop)
        {
            break;
        }
    }
    return reports;
}

auto nullification_path(const ConditionedPosterior& post,
                        const std::vector<Eigen::Index>& order) -> std::vector<CentralityReport>
{
    require_in_play(post);
    if (static_cast<Eigen::Index>(order.size()) > post.p_effective() - 2)
    {
        throw ArgumentError("nullification list longer than p_effective - 2");
    }

    std::vector<CentralityReport> reports;
    reports.reserve(order.size());
    ConditionedPosterior current = post;
    for (const Eigen::Index variable : order)
    {
        current = nullify_and_condition(current, variable);
        reports.push_back(compute_rates(current));
    }
    return reports;
}

}  // namespace rategp
