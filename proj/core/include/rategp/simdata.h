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

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rategp/genotype.h"

namespace rategp
{

enum class SimModel
{
    Standard,    // y = additive + interactions + noise
    Stratified,  // adds a structured component from genotype principal components
};

/// Configuration of a synthetic phenotype draw. The variance budget is
/// expressed as fractions of a total of 1: additive effects get
/// rho * h2, pairwise interactions (1 - rho) * h2, the PC component
/// pc_variance_fraction (Stratified only), and noise the remainder.
struct SimConfig
{
    Eigen::Index n = 0;
    Eigen::Index p = 0;
    std::vector<Eigen::Index> causal_indices;  // 0-based
    double h2 = 0.6;
    double rho = 1.0;
    SimModel model = SimModel::Standard;
    int n_pcs = 0;
    double pc_variance_fraction = 0.0;
    // Partition sizes (g1, g2) of the causal set; interactions are then
    // restricted to cross pairs between the two groups.
    std::optional<std::pair<int, int>> group_split;
    // When set, every causal additive effect starts at this value instead
    // of a N(0,1) draw (used for null-uniformity experiments).
    std::optional<double> fixed_beta;
    std::uint64_t seed = 0;
};

/// Achieved sample variances of the phenotype components after rescaling.
struct VarianceReport
{
    double additive = 0.0;     // V(X beta)
    double interaction = 0.0;  // V(W gamma)
    double structure = 0.0;    // V(Z omega)
    double noise = 0.0;        // V(eps)

    double total() const { return additive + interaction + structure + noise; }
};

/// Ground truth of one simulated dataset.
struct SimTruth
{
    Eigen::VectorXd beta;   // p additive effects, zero off support, post-scaling
    Eigen::VectorXd gamma;  // interaction effects aligned with interaction_pairs
    std::vector<std::pair<Eigen::Index, Eigen::Index>> interaction_pairs;
    std::vector<Eigen::Index> causal_indices;
    Eigen::VectorXd y;  // n phenotypes
    VarianceReport variance_report;
};

/// Simulates unlinked genotypes: per-variant allele frequencies are drawn
/// uniformly from freq_range, dosages as Binomial(2, freq), and columns
/// are standardized. Columns that come out constant are redrawn a bounded
/// number of times before a DataError names the offending column.
GenotypeMatrix simulate_genotypes(Eigen::Index n,
                                  Eigen::Index p,
                                  std::pair<double, double> freq_range,
                                  std::uint64_t seed);

/// Simulates genotypes with population structure: each variant gets a
/// shared ancestral frequency and per-subpopulation frequencies drawn
/// from the Balding-Nichols beta distribution with divergence fst;
/// samples are assigned to subpopulations in contiguous equal blocks.
GenotypeMatrix simulate_structured_genotypes(Eigen::Index n,
                                             Eigen::Index p,
                                             int n_subpops,
                                             double fst,
                                             std::uint64_t seed);

/// Enumerates the interaction pairs implied by a causal set: all pairs
/// (j < k) of causal variants, or only cross pairs between the two groups
/// when a split is given (members of the same group never interact).
std::vector<std::pair<Eigen::Index, Eigen::Index>> interaction_pairs(
    const std::vector<Eigen::Index>& causal_indices,
    const std::optional<std::pair<int, int>>& group_split);

/// Draws a phenotype under cfg. Each component is rescaled by its
/// achieved sample standard deviation so the variance budget is exact on
/// the realized data; effect sizes are rescaled by the same factors.
SimTruth simulate_phenotype(const GenotypeMatrix& genotypes, const SimConfig& cfg);

/// Principal component scores of a standardized matrix (columns U_k s_k of
/// the SVD), with the sign of each component fixed so that its loading of
/// largest magnitude is positive.
Eigen::MatrixXd principal_component_scores(const Eigen::MatrixXd& standardized, int n_components);

}  // namespace rategp
