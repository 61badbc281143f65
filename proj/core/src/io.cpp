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

#include "rategp/io.h"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rategp/errors.h"

namespace rategp
{
namespace
{

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw DataError("cannot open '" + path + "' for writing");
    }
    return out;
}

std::ifstream open_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw DataError("cannot open '" + path + "' for reading");
    }
    return in;
}

void check_write(const std::ofstream& out, const std::string& path)
{
    if (!out)
    {
        throw DataError("write to '" + path + "' failed");
    }
}

std::vector<std::string> split_tabs(const std::string& line)
{
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    for (;;)
    {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos)
        {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no)
{
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
    {
        throw DataError("'" + path + "' line " + std::to_string(line_no)
                        + ": cannot parse number '" + field + "'");
    }
    return value;
}

// Data lines of a TSV file: comments ('#') and blank lines skipped,
// trailing '\r' stripped, paired with 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> data_lines(std::ifstream& in)
{
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        lines.emplace_back(line_no, line);
    }
    return lines;
}

}  // namespace

auto format_double(double value) -> std::string
{
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

auto digest_file(const std::string& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw DataError("cannot open '" + path + "' for digesting");
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0)
    {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i)
        {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

auto write_genotypes(const std::string& path, const GenotypeMatrix& genotypes) -> void
{
    std::ofstream out = open_output(path);
    for (Eigen::Index j = 0; j < genotypes.n_snps(); ++j)
    {
        out << (j > 0 ? "\t" : "") << genotypes.snp_ids[static_cast<std::size_t>(j)];
    }
    out << '\n';
    for (Eigen::Index i = 0; i < genotypes.n_samples(); ++i)
    {
        for (Eigen::Index j = 0; j < genotypes.n_snps(); ++j)
        {
            out << (j > 0 ? "\t" : "") << format_double(genotypes.values(i, j));
        }
        out << '\n';
    }
    check_write(out, path);
}

auto read_genotypes(const std::string& path) -> GenotypeMatrix
{
    std::ifstream in = open_input(path);
    const auto lines = data_lines(in);
    if (lines.size() < 2)
    {
        throw DataError("'" + path + "': expected a header row and at least one sample row");
    }

    std::vector<std::string> ids = split_tabs(lines[0].second);
    const std::size_t p = ids.size();
    const std::size_t n = lines.size() - 1;

    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < n; ++r)
    {
        const auto& [line_no, line] = lines[r + 1];
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != p)
        {
            throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected "
                            + std::to_string(p) + " fields, found "
                            + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < p; ++c)
        {
            values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_double(fields[c], path, line_no);
        }
    }
    return make_genotype_matrix(std::move(values), std::move(ids));
}

auto write_phenotype(const std::string& path, const Eigen::VectorXd& y) -> void
{
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < y.size(); ++i)
    {
        out << format_double(y(i)) << '\n';
    }
    check_write(out, path);
}

auto read_phenotype(const std::string& path) -> Eigen::VectorXd
{
    std::ifstream in = open_input(path);
    const auto lines = data_lines(in);
    if (lines.empty())
    {
        throw DataError("'" + path + "': phenotype file is empty");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i)
    {
        const auto& [line_no, line] = lines[i];
        y(static_cast<Eigen::Index>(i)) = parse_double(line, path, line_no);
    }
    return y;
}

auto write_truth(const std::string& path, const GenotypeMatrix& genotypes, const SimTruth& truth)
    -> void
{
    std::ofstream out = open_output(path);
    out << "# variance additive=" << format_double(truth.variance_report.additive)
        << " interaction=" << format_double(truth.variance_report.interaction)
        << " structure=" << format_double(truth.variance_report.structure)
        << " noise=" << format_double(truth.variance_report.noise) << '\n';
    for (std::size_t c = 0; c < truth.interaction_pairs.size(); ++c)
    {
        const auto [j, k] = truth.interaction_pairs[c];
        out << "# interaction_pair\t" << genotypes.snp_ids[static_cast<std::size_t>(j)] << '\t'
            << genotypes.snp_ids[static_cast<std::size_t>(k)] << '\t'
            << format_double(truth.gamma(static_cast<Eigen::Index>(c))) << '\n';
    }
    out << "snp_id\tbeta\tis_causal\n";
    const std::set<Eigen::Index> causal(truth.causal_indices.begin(),
                                        truth.causal_indices.end());
    for (Eigen::Index j = 0; j < genotypes.n_snps(); ++j)
    {
        out << genotypes.snp_ids[static_cast<std::size_t>(j)] << '\t'
            << format_double(truth.beta(j)) << '\t' << (causal.count(j) > 0 ? 1 : 0) << '\n';
    }
    check_write(out, path);
}

auto read_truth(const std::string& path) -> TruthRecord
{
    std::ifstream in = open_input(path);
    const auto lines = data_lines(in);
    if (lines.size() < 2)
    {
        throw DataError("'" + path + "': expected a header and at least one truth row");
    }

    TruthRecord record;
    const std::size_t n_rows = lines.size() - 1;
    record.beta.resize(static_cast<Eigen::Index>(n_rows));
    for (std::size_t r = 0; r < n_rows; ++r)
    {
        const auto& [line_no, line] = lines[r + 1];
        const std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 3)
        {
            throw DataError("'" + path + "' line " + std::to_string(line_no)
                            + ": expected 3 fields (snp_id, beta, is_causal)");
        }
        record.snp_ids.push_back(fields[0]);
        record.beta(static_cast<Eigen::Index>(r)) = parse_double(fields[1], path, line_no);
        if (fields[2] == "1")
        {
            record.causal_indices.push_back(static_cast<Eigen::Index>(r));
        }
        else if (fields[2] != "0")
        {
            throw DataError("'" + path + "' line " + std::to_string(line_no)
                            + ": is_causal must be 0 or 1");
        }
    }
    return record;
}

auto write_centrality_report(const std::string& path, const CentralityReport& report,
                             const std::vector<std::string>& snp_ids) -> void
{
    std::ofstream out = open_output(path);
    out << "# delta=" << format_double(report.delta) << '\n';
    out << "# ess=" << format_double(report.ess) << '\n';
    out << "# p_effective=" << report.p_effective << '\n';
    out << "# nullified=";
    for (std::size_t i = 0; i < report.nullified.size(); ++i)
    {
        out << (i > 0 ? "," : "") << snp_ids[static_cast<std::size_t>(report.nullified[i])];
    }
    out << '\n';
    for (const std::string& note : report.notes)
    {
        out << "# note: " << note << '\n';
    }
    out << "variable_id\tkld\trate\tsignificant\n";
    for (Eigen::Index i = 0; i < report.p_effective; ++i)
    {
        const auto original = static_cast<std::size_t>(report.variables[static_cast<std::size_t>(i)]);
        out << snp_ids[original] << '\t' << format_double(report.kld(i)) << '\t'
            << format_double(report.rate(i)) << '\t'
            << (report.significant[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
    check_write(out, path);
}

auto write_scan_result(const std::string& path, const ScanResult& scan,
                       const std::vector<std::string>& snp_ids) -> void
{
    std::ofstream out = open_output(path);
    out << "# bonferroni_threshold=" << format_double(scan.bonferroni_threshold) << '\n';
    out << "variable_id\tbeta\tt\tp_value\n";
    for (Eigen::Index j = 0; j < scan.n_variables(); ++j)
    {
        out << snp_ids[static_cast<std::size_t>(j)] << '\t' << format_double(scan.betas(j))
            << '\t' << format_double(scan.t_stats(j)) << '\t'
            << format_double(scan.p_values(j)) << '\n';
    }
    check_write(out, path);
}

auto write_power_curve(const std::string& path, const PowerCurve& curve) -> void
{
    std::ofstream out = open_output(path);
    out << "# auc=" << format_double(curve.auc) << '\n';
    for (const std::string& note : curve.notes)
    {
        out << "# note: " << note << '\n';
    }
    out << "fpr\ttpr\n";
    for (Eigen::Index i = 0; i < curve.fpr.size(); ++i)
    {
        out << format_double(curve.fpr(i)) << '\t' << format_double(curve.tpr(i)) << '\n';
    }
    check_write(out, path);
}

auto write_draw_dump(const std::string& path, const PosteriorDraws& draws) -> void
{
    std::ofstream out = open_output(path);
    out << "iteration\ttau2";
    for (Eigen::Index i = 0; i < draws.n_samples(); ++i)
    {
        out << "\tf_" << (i + 1);
    }
    out << '\n';
    for (Eigen::Index t = 0; t < draws.n_draws(); ++t)
    {
        const int iteration =
            draws.config.burn_in + (static_cast<int>(t) + 1) * draws.config.thin;
        out << iteration << '\t' << format_double(draws.tau2_draws(t));
        for (Eigen::Index i = 0; i < draws.n_samples(); ++i)
        {
            out << '\t' << format_double(draws.f_draws(t, i));
        }
        out << '\n';
    }
    check_write(out, path);
}

}  // namespace rategp
