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

#include <string>
#include <vector>

#include <Eigen/Core>

namespace rategp
{

/// Design matrix of standardized allele dosages. Every column has
/// empirical mean 0 and sample standard deviation 1 (n-1 divisor);
/// constant columns are rejected at construction.
struct GenotypeMatrix
{
    Eigen::MatrixXd values;             // n x p, standardized
    std::vector<std::string> snp_ids;   // p labels
    std::vector<double> raw_frequencies;  // p allele frequencies, simulated data only

    Eigen::Index n_samples() const { return values.rows(); }
    Eigen::Index n_snps() const { return values.cols(); }
};

/// Centers each column and scales it to unit sample standard deviation.
/// Throws DataError naming the first constant column encountered.
/// Columns already satisfying the invariant (|mean| < 1e-10, |sd - 1| <
/// 1e-10) are returned bit-identical, so the transform is exactly idempotent
/// and serialized matrices round-trip without perturbation.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& raw);

/// Builds a GenotypeMatrix from raw values (dosages or already
/// standardized numbers), standardizing the columns. `snp_ids` may be
/// empty, in which case labels snp1..snpP are generated.
/// Requires n >= 2 samples and p >= 2 columns.
GenotypeMatrix make_genotype_matrix(Eigen::MatrixXd raw, std::vector<std::string> snp_ids = {});

}  // namespace rategp
