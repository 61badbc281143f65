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

#include "rategp/genotype.h"

#include <cmath>
#include <utility>

#include "rategp/errors.h"

namespace rategp
{

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& raw)
{
    const Eigen::Index n = raw.rows();
    const Eigen::Index p = raw.cols();
    if (n < 2)
    {
        throw ArgumentError("standardize_columns: need at least 2 rows");
    }

    Eigen::MatrixXd out(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
    {
        const auto col = raw.col(j);
        if (col.maxCoeff() == col.minCoeff())
        {
            throw DataError("constant column at index " + std::to_string(j)
                            + ": cannot standardize");
        }
        const double mean = col.mean();
        Eigen::VectorXd centered = col.array() - mean;
        const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
        if (!(sd > 0.0) || !std::isfinite(sd))
        {
            throw DataError("degenerate column at index " + std::to_string(j)
                            + ": zero or non-finite standard deviation");
        }
        // A column already inside the standardization invariant is left
        // bit-identical, which makes the transform idempotent and lets
        // serialized matrices round-trip exactly.
        if (std::abs(mean) < 1e-10 && std::abs(sd - 1.0) < 1e-10)
        {
            out.col(j) = col;
            continue;
        }
        out.col(j) = centered / sd;
    }
    return out;
}

GenotypeMatrix make_genotype_matrix(Eigen::MatrixXd raw, std::vector<std::string> snp_ids)
{
    const Eigen::Index n = raw.rows();
    const Eigen::Index p = raw.cols();
    if (n < 2 || p < 2)
    {
        throw ArgumentError("genotype matrix requires n >= 2 samples and p >= 2 variants, got "
                            + std::to_string(n) + " x " + std::to_string(p));
    }
    if (!raw.allFinite())
    {
        throw DataError("genotype matrix contains non-finite entries");
    }
    if (!snp_ids.empty() && static_cast<Eigen::Index>(snp_ids.size()) != p)
    {
        throw DataError("snp_ids size " + std::to_string(snp_ids.size())
                        + " does not match column count " + std::to_string(p));
    }
    if (snp_ids.empty())
    {
        snp_ids.reserve(p);
        for (Eigen::Index j = 0; j < p; ++j)
        {
            snp_ids.push_back("snp" + std::to_string(j + 1));
        }
    }

    GenotypeMatrix g;
    g.values = standardize_columns(raw);
    g.snp_ids = std::move(snp_ids);
    return g;
}

}  // namespace rategp
