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

#ifndef RATEGP_IO_H_
#define RATEGP_IO_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rategp/baseline.h"
#include "rategp/genotype.h"
#include "rategp/gp.h"
#include "rategp/rate.h"
#include "rategp/simdata.h"

namespace rategp
{

// All files are UTF-8 TSV.  Lines starting with '#' are metadata comments
// and are skipped by the readers.  Every floating-point value is serialized
// with 17 significant digits, so write-then-read round-trips are exact.

// Shortest exact decimal form of a double (printf %.17g).
auto format_double(double value) -> std::string;

// FNV-1a 64-bit digest of a file's bytes, as a 16-hex-digit string.
// Throws DataError when the file cannot be opened.
auto digest_file(const std::string& path) -> std::string;

// Genotype file: one header row of variable ids, then one row per sample.
auto write_genotypes(const std::string& path, const GenotypeMatrix& genotypes) -> void;
auto read_genotypes(const std::string& path) -> GenotypeMatrix;

// Phenotype file: a single column of values, no header.
auto write_phenotype(const std::string& path, const Eigen::VectorXd& y) -> void;
auto read_phenotype(const std::string& path) -> Eigen::VectorXd;

// Truth file: (variable_id, beta, is_causal) rows; interaction pairs and the
// variance decomposition are carried in '#' metadata lines.
auto write_truth(const std::string& path, const GenotypeMatrix& genotypes,
                 const SimTruth& truth) -> void;

struct TruthRecord
{
    std::vector<std::string> snp_ids;
    Eigen::VectorXd beta;
    std::vector<Eigen::Index> causal_indices;
};
auto read_truth(const std::string& path) -> TruthRecord;

// Centrality report: (variable_id, kld, rate, significant) rows with delta,
// ess, p_effective, and the nullified-so-far list in metadata comments.
auto write_centrality_report(const std::string& path, const CentralityReport& report,
                             const std::vector<std::string>& snp_ids) -> void;

// Scan file: (variable_id, beta, t, p_value) rows with the Bonferroni
// threshold in a metadata comment.
auto write_scan_result(const std::string& path, const ScanResult& scan,
                       const std::vector<std::string>& snp_ids) -> void;

// Power curve: (fpr, tpr) rows with the AUC in a metadata comment.
auto write_power_curve(const std::string& path, const PowerCurve& curve) -> void;

// Posterior draw dump: (iteration, tau2, f_1..f_n) rows, one per retained
// draw, with the original sweep index reconstructed from the config.
auto write_draw_dump(const std::string& path, const PosteriorDraws& draws) -> void;

}  // namespace rategp

#endif  // RATEGP_IO_H_
