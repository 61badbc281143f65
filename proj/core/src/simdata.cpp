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

#include "rategp/simdata.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "rategp/errors.h"

namespace rategp
{
namespace
{

constexpr int kMaxColumnRetries = 100;

double sample_variance(const Eigen::VectorXd& v)
{
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

// Rescales `component` in place to the exact target sample variance and
// returns the applied factor (0 when the target is 0).
double rescale_to_variance(Eigen::VectorXd& component, double target_variance,
                           const char* label)
{
    if (target_variance == 0.0)
    {
        component.setZero();
        return 0.0;
    }
    const double achieved = sample_variance(component);
    if (!(achieved > 0.0) || !std::isfinite(achieved))
    {
        throw NumericalError(std::string("cannot rescale ") + label
                             + ": achieved variance is zero or non-finite");
    }
    const double factor = std::sqrt(target_variance / achieved);
    component *= factor;
    return factor;
}

Eigen::VectorXd standard_normal_vector(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        v(i) = nd(rng);
    }
    return v;
}

bool column_is_constant(const Eigen::VectorXd& col)
{
    return col.maxCoeff() == col.minCoeff();
}

// Beta(a, b) via two gamma draws; the standard library has no beta distribution.
double beta_draw(std::mt19937_64& rng, double a, double b)
{
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
}

void validate_config(const GenotypeMatrix& genotypes, const SimConfig& cfg)
{
    if (cfg.n != genotypes.n_samples() || cfg.p != genotypes.n_snps())
    {
        throw ArgumentError("SimConfig dimensions (" + std::to_string(cfg.n) + " x "
                            + std::to_string(cfg.p) + ") do not match genotype matrix ("
                            + std::to_string(genotypes.n_samples()) + " x "
                            + std::to_string(genotypes.n_snps()) + ")");
    }
    if (!(cfg.h2 >= 0.0 && cfg.h2 < 1.0))
    {
        throw ArgumentError("h2 must lie in [0, 1), got " + std::to_string(cfg.h2));
    }
    if (!(cfg.rho > 0.0 && cfg.rho <= 1.0))
    {
        throw ArgumentError("rho must lie in (0, 1], got " + std::to_string(cfg.rho));
    }

    std::set<Eigen::Index> seen;
    for (const Eigen::Index j : cfg.causal_indices)
    {
        if (j < 0 || j >= cfg.p)
        {
            throw ArgumentError("causal index " + std::to_string(j) + " out of range [0, "
                                + std::to_string(cfg.p) + ")");
        }
        if (!seen.insert(j).second)
        {
            throw ArgumentError("duplicate causal index " + std::to_string(j));
        }
    }
    if (cfg.h2 > 0.0 && cfg.causal_indices.empty())
    {
        throw ArgumentError("h2 > 0 requires a non-empty causal set");
    }
    if (cfg.rho < 1.0 && cfg.causal_indices.size() < 2)
    {
        throw ArgumentError("rho < 1 requires at least 2 causal variants to form "
                            "interaction pairs");
    }
    if (cfg.group_split)
    {
        const auto [g1, g2] = *cfg.group_split;
        if (g1 < 1 || g2 < 1
            || static_cast<std::size_t>(g1) + static_cast<std::size_t>(g2)
                   != cfg.causal_indices.size())
        {
            throw ArgumentError("group_split (" + std::to_string(g1) + ", " + std::to_string(g2)
                                + ") must be positive and sum to the causal count "
                                + std::to_string(cfg.causal_indices.size()));
        }
    }
    if (cfg.model == SimModel::Stratified)
    {
        if (cfg.n_pcs < 1)
        {
            throw ArgumentError("Stratified model requires n_pcs >= 1");
        }
        if (cfg.n_pcs >= std::min(cfg.n, cfg.p))
        {
            throw ArgumentError("n_pcs must be below min(n, p)");
        }
        if (!(cfg.pc_variance_fraction >= 0.0 && cfg.pc_variance_fraction <= 1.0 - cfg.h2))
        {
            throw ArgumentError("pc_variance_fraction must lie in [0, 1 - h2]");
        }
    }
}

}  // namespace

GenotypeMatrix simulate_genotypes(Eigen::Index n,
                                  Eigen::Index p,
                                  std::pair<double, double> freq_range,
                                  std::uint64_t seed)
{
    const auto [lo, hi] = freq_range;
    if (!(lo > 0.0 && lo < hi && hi < 1.0))
    {
        throw ArgumentError("frequency range must satisfy 0 < lo < hi < 1");
    }
    if (n < 2 || p < 2)
    {
        throw ArgumentError("simulate_genotypes requires n >= 2 and p >= 2");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq_dist(lo, hi);

    Eigen::MatrixXd raw(n, p);
    std::vector<double> freqs(p);
    for (Eigen::Index j = 0; j < p; ++j)
    {
        int attempt = 0;
        for (;; ++attempt)
        {
            if (attempt >= kMaxColumnRetries)
            {
                throw DataError("column " + std::to_string(j) + " stayed constant after "
                                + std::to_string(kMaxColumnRetries) + " redraws");
            }
            const double f = freq_dist(rng);
            std::binomial_distribution<int> dosage(2, f);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                raw(i, j) = static_cast<double>(dosage(rng));
            }
            if (!column_is_constant(raw.col(j)))
            {
                freqs[j] = f;
                break;
            }
        }
    }

    GenotypeMatrix g = make_genotype_matrix(std::move(raw));
    g.raw_frequencies = std::move(freqs);
    return g;
}

GenotypeMatrix simulate_structured_genotypes(Eigen::Index n,
                                             Eigen::Index p,
                                             int n_subpops,
                                             double fst,
                                             std::uint64_t seed)
{
    if (n_subpops < 2)
    {
        throw ArgumentError("simulate_structured_genotypes requires n_subpops >= 2");
    }
    if (!(fst > 0.0 && fst < 0.5))
    {
        throw ArgumentError("fst must lie in (0, 0.5)");
    }
    if (n < 2 || p < 2)
    {
        throw ArgumentError("simulate_structured_genotypes requires n >= 2 and p >= 2");
    }
    if (n < n_subpops)
    {
        throw ArgumentError("need at least one sample per subpopulation");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ancestral_dist(0.1, 0.9);
    const double shape = (1.0 - fst) / fst;

    // Sample i belongs to subpopulation floor(i * k / n): contiguous,
    // near-equal blocks.
    auto subpop_of = [&](Eigen::Index i)
    { return static_cast<int>((i * n_subpops) / n); };

    Eigen::MatrixXd raw(n, p);
    std::vector<double> freqs(p);
    for (Eigen::Index j = 0; j < p; ++j)
    {
        int attempt = 0;
        for (;; ++attempt)
        {
            if (attempt >= kMaxColumnRetries)
            {
                throw DataError("column " + std::to_string(j) + " stayed constant after "
                                + std::to_string(kMaxColumnRetries) + " redraws");
            }
            const double ancestral = ancestral_dist(rng);
            std::vector<double> subpop_freq(n_subpops);
            for (int s = 0; s < n_subpops; ++s)
            {
                subpop_freq[s] = beta_draw(rng, ancestral * shape, (1.0 - ancestral) * shape);
            }
            for (Eigen::Index i = 0; i < n; ++i)
            {
                std::binomial_distribution<int> dosage(2, subpop_freq[subpop_of(i)]);
                raw(i, j) = static_cast<double>(dosage(rng));
            }
            if (!column_is_constant(raw.col(j)))
            {
                freqs[j] = ancestral;
                break;
            }
        }
    }

    GenotypeMatrix g = make_genotype_matrix(std::move(raw));
    g.raw_frequencies = std::move(freqs);
    return g;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> interaction_pairs(
    const std::vector<Eigen::Index>& causal_indices,
    const std::optional<std::pair<int, int>>& group_split)
{
    std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
    if (group_split)
    {
        const auto [g1, g2] = *group_split;
        pairs.reserve(static_cast<std::size_t>(g1) * static_cast<std::size_t>(g2));
        for (int a = 0; a < g1; ++a)
        {
            for (int b = 0; b < g2; ++b)
            {
                pairs.emplace_back(causal_indices[a], causal_indices[g1 + b]);
            }
        }
    }
    else
    {
        const std::size_t m = causal_indices.size();
        pairs.reserve(m * (m - 1) / 2);
        for (std::size_t a = 0; a < m; ++a)
        {
            for (std::size_t b = a + 1; b < m; ++b)
            {
                pairs.emplace_back(causal_indices[a], causal_indices[b]);
            }
        }
    }
    return pairs;
}

Eigen::MatrixXd principal_component_scores(const Eigen::MatrixXd& standardized, int n_components)
{
    Eigen::BDCSVD<Eigen::MatrixXd> svd(standardized, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
    {
        throw NumericalError("SVD failed while computing principal components");
    }
    if (n_components < 1 || n_components > svd.singularValues().size())
    {
        throw ArgumentError("n_components out of range for PCA");
    }

    Eigen::MatrixXd scores(standardized.rows(), n_components);
    for (int k = 0; k < n_components; ++k)
    {
        Eigen::Index max_row = 0;
        svd.matrixV().col(k).cwiseAbs().maxCoeff(&max_row);
        const double sign = svd.matrixV()(max_row, k) < 0.0 ? -1.0 : 1.0;
        scores.col(k) = sign * svd.matrixU().col(k) * svd.singularValues()(k);
    }
    return scores;
}

SimTruth simulate_phenotype(const GenotypeMatrix& genotypes, const SimConfig& cfg)
{
    validate_config(genotypes, cfg);

    const Eigen::Index n = cfg.n;
    const Eigen::Index p = cfg.p;
    std::mt19937_64 rng(cfg.seed);

    SimTruth truth;
    truth.causal_indices = cfg.causal_indices;
    truth.beta = Eigen::VectorXd::Zero(p);
    truth.y = Eigen::VectorXd::Zero(n);

    const double additive_target = cfg.rho * cfg.h2;
    const double interaction_target = (1.0 - cfg.rho) * cfg.h2;
    const double structure_target =
        cfg.model == SimModel::Stratified ? cfg.pc_variance_fraction : 0.0;
    const double noise_target = 1.0 - cfg.h2 - structure_target;

    // Additive component. Effects are drawn first so the stream layout is
    // independent of the later components.
    Eigen::VectorXd additive = Eigen::VectorXd::Zero(n);
    if (!cfg.causal_indices.empty())
    {
        for (const Eigen::Index j : cfg.causal_indices)
        {
            truth.beta(j) = cfg.fixed_beta ? *cfg.fixed_beta
                                           : std::normal_distribution<double>(0.0, 1.0)(rng);
        }
        additive = genotypes.values * truth.beta;
        const double factor = rescale_to_variance(additive, additive_target, "additive component");
        truth.beta *= factor;
    }

    // Pairwise interaction component: element-wise products of the
    // standardized causal columns, themselves standardized before the
    // effects are applied.
    Eigen::VectorXd interaction = Eigen::VectorXd::Zero(n);
    if (cfg.rho < 1.0)
    {
        truth.interaction_pairs = interaction_pairs(cfg.causal_indices, cfg.group_split);
        const auto n_pairs = static_cast<Eigen::Index>(truth.interaction_pairs.size());
        Eigen::MatrixXd w_raw(n, n_pairs);
        for (Eigen::Index c = 0; c < n_pairs; ++c)
        {
            const auto [j, k] = truth.interaction_pairs[c];
            w_raw.col(c) = genotypes.values.col(j).cwiseProduct(genotypes.values.col(k));
            if (column_is_constant(w_raw.col(c)))
            {
                throw DataError("interaction column for pair (" + std::to_string(j) + ", "
                                + std::to_string(k) + ") is constant");
            }
        }
        const Eigen::MatrixXd w = standardize_columns(w_raw);
        truth.gamma = standard_normal_vector(rng, n_pairs);
        interaction = w * truth.gamma;
        const double factor =
            rescale_to_variance(interaction, interaction_target, "interaction component");
        truth.gamma *= factor;
    }

    // Structured component from genotype principal components.
    Eigen::VectorXd structure = Eigen::VectorXd::Zero(n);
    if (cfg.model == SimModel::Stratified && structure_target > 0.0)
    {
        const Eigen::MatrixXd pcs = principal_component_scores(genotypes.values, cfg.n_pcs);
        const Eigen::VectorXd omega = standard_normal_vector(rng, cfg.n_pcs);
        structure = pcs * omega;
        rescale_to_variance(structure, structure_target, "structured component");
    }

    Eigen::VectorXd noise = standard_normal_vector(rng, n);
    rescale_to_variance(noise, noise_target, "noise component");

    truth.y = additive + interaction + structure + noise;
    truth.variance_report.additive = cfg.causal_indices.empty() ? 0.0 : sample_variance(additive);
    truth.variance_report.interaction = cfg.rho < 1.0 ? sample_variance(interaction) : 0.0;
    truth.variance_report.structure =
        (cfg.model == SimModel::Stratified && structure_target > 0.0) ? sample_variance(structure)
                                                                      : 0.0;
    truth.variance_report.noise = noise_target > 0.0 ? sample_variance(noise) : 0.0;
    return truth;
}

}  // namespace rategp
