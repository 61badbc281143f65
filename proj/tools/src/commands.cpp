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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <utility>

#include "manifest.h"
#include "rategp/baseline.h"
#include "rategp/errors.h"
#include "rategp/genotype.h"
#include "rategp/gp.h"
#include "rategp/io.h"
#include "rategp/kernel.h"
#include "rategp/projection.h"
#include "rategp/rate.h"
#include "rategp/simdata.h"

namespace rategp::tools
{
namespace
{

// Reraises module exceptions with the pipeline stage name prepended, keeping
// the dynamic type (and therefore the process exit code) intact.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn())
{
    try
    {
        return fn();
    }
    catch (const ArgumentError& e)
    {
        throw ArgumentError(std::string(name) + ": " + e.what());
    }
    catch (const DataError& e)
    {
        throw DataError(std::string(name) + ": " + e.what());
    }
    catch (const NumericalError& e)
    {
        throw NumericalError(std::string(name) + ": " + e.what());
    }
}

std::vector<Eigen::Index> to_zero_based(const std::vector<std::int64_t>& one_based,
                                        std::int64_t p, const char* flag)
{
    std::vector<Eigen::Index> indices;
    indices.reserve(one_based.size());
    for (const std::int64_t j : one_based)
    {
        if (j < 1 || j > p)
        {
            throw ArgumentError(std::string(flag) + ": index " + std::to_string(j)
                                + " outside 1.." + std::to_string(p));
        }
        indices.push_back(static_cast<Eigen::Index>(j - 1));
    }
    return indices;
}

nlohmann::json index_json(const std::vector<Eigen::Index>& zero_based)
{
    nlohmann::json one_based = nlohmann::json::array();
    nlohmann::json zero = nlohmann::json::array();
    for (const Eigen::Index j : zero_based)
    {
        one_based.push_back(j + 1);
        zero.push_back(j);
    }
    return {{"one_based", one_based}, {"zero_based", zero}};
}

GenotypeMatrix load_genotypes(const std::string& path, RunManifest& manifest)
{
    GenotypeMatrix genotypes = stage("reading genotypes", [&] { return read_genotypes(path); });
    manifest.add_input(path);
    return genotypes;
}

Eigen::VectorXd load_phenotype(const std::string& path, Eigen::Index n, RunManifest& manifest)
{
    Eigen::VectorXd y = stage("reading phenotype", [&] { return read_phenotype(path); });
    manifest.add_input(path);
    if (y.size() != n)
    {
        throw DataError("phenotype has " + std::to_string(y.size())
                        + " values but the genotype matrix has " + std::to_string(n)
                        + " samples");
    }
    return y;
}

KernelSpec make_kernel_spec(const std::string& kernel, const std::optional<double>& bandwidth,
                            double jitter)
{
    KernelSpec spec;
    if (kernel == "gaussian")
    {
        spec.kind = KernelSpec::Kind::Gaussian;
    }
    else if (kernel == "linear")
    {
        spec.kind = KernelSpec::Kind::Linear;
    }
    else
    {
        throw ArgumentError("--kernel must be 'gaussian' or 'linear', got '" + kernel + "'");
    }
    spec.bandwidth = bandwidth;
    spec.jitter = jitter;
    return spec;
}

// The full fit: covariance -> Gibbs draws -> projected draws -> Gaussian
// posterior summary, with per-stage timings recorded.
EffectSizePosterior fit_effect_size_posterior(const GenotypeMatrix& genotypes,
                                              const Eigen::VectorXd& y, const KernelSpec& spec,
                                              const GpConfig& gp_cfg, double sv_cutoff,
                                              double ridge, RunManifest& manifest,
                                              PosteriorDraws* draws_out = nullptr)
{
    StageTimer timer;
    const CovarianceMatrix k =
        stage("building covariance", [&] { return build_covariance(genotypes.values, spec); });
    manifest.add_timing("covariance", timer.lap());
    manifest.parameters()["resolved_bandwidth"] =
        k.spec.bandwidth ? nlohmann::json(*k.spec.bandwidth) : nlohmann::json(nullptr);

    const PosteriorDraws draws = stage("gibbs sampling", [&] { return gibbs_fit(y, k, gp_cfg); });
    manifest.add_timing("gibbs", timer.lap());

    const Eigen::MatrixXd beta_draws =
        stage("projecting draws", [&] { return project_draws(genotypes.values, draws, sv_cutoff); });
    const EffectSizePosterior post = stage(
        "summarizing posterior", [&] { return summarize_posterior(beta_draws, ridge, sv_cutoff); });
    manifest.add_timing("projection", timer.lap());

    if (draws_out != nullptr)
    {
        *draws_out = draws;
    }
    return post;
}

// Piecewise-linear evaluation of an ROC curve at one false-positive rate.
double tpr_at(const PowerCurve& curve, double fpr)
{
    const Eigen::Index m = curve.fpr.size();
    if (fpr >= curve.fpr(m - 1))
    {
        return curve.tpr(m - 1);
    }
    Eigen::Index right = 0;
    while (curve.fpr(right) <= fpr)
    {
        ++right;
    }
    if (right == 0)
    {
        return curve.tpr(0);
    }
    const Eigen::Index left = right - 1;
    const double span = curve.fpr(right) - curve.fpr(left);
    const double w = span > 0.0 ? (fpr - curve.fpr(left)) / span : 1.0;
    return curve.tpr(left) + w * (curve.tpr(right) - curve.tpr(left));
}

PowerCurve mean_curve(const std::vector<PowerCurve>& curves, double mean_auc)
{
    constexpr int kGridPoints = 101;
    PowerCurve mean;
    mean.fpr.resize(kGridPoints);
    mean.tpr.resize(kGridPoints);
    for (int g = 0; g < kGridPoints; ++g)
    {
        const double fpr = static_cast<double>(g) / (kGridPoints - 1);
        double tpr = 0.0;
        for (const PowerCurve& curve : curves)
        {
            tpr += tpr_at(curve, fpr);
        }
        mean.fpr(g) = fpr;
        mean.tpr(g) = tpr / static_cast<double>(curves.size());
    }
    mean.auc = mean_auc;
    mean.notes.push_back("vertical average of " + std::to_string(curves.size())
                         + " replicate curves; auc is the mean of per-replicate AUCs");
    return mean;
}

double standard_error(const std::vector<double>& values)
{
    const auto n = static_cast<double>(values.size());
    if (values.size() < 2)
    {
        return 0.0;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values)
    {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / (n - 1.0) / n);
}

double mean_of(const std::vector<double>& values)
{
    return std::accumulate(values.begin(), values.end(), 0.0)
           / static_cast<double>(values.size());
}

}  // namespace

auto run_simulate(const SimulateOptions& opt) -> void
{
    RunManifest manifest("simulate", opt.seed);
    StageTimer timer;

    if (opt.model != "standard" && opt.model != "stratified")
    {
        throw ArgumentError("--model must be 'standard' or 'stratified', got '" + opt.model
                            + "'");
    }
    if (!opt.groups.empty() && opt.groups.size() != 2)
    {
        throw ArgumentError("--groups takes exactly two sizes, e.g. --groups 5,25");
    }

    SimConfig cfg;
    cfg.n = static_cast<Eigen::Index>(opt.n);
    cfg.p = static_cast<Eigen::Index>(opt.p);
    cfg.causal_indices = to_zero_based(opt.causal, opt.p, "--causal");
    cfg.h2 = opt.h2;
    cfg.rho = opt.rho;
    cfg.model = opt.model == "stratified" ? SimModel::Stratified : SimModel::Standard;
    cfg.n_pcs = opt.pcs;
    cfg.pc_variance_fraction = opt.pc_var;
    if (!opt.groups.empty())
    {
        cfg.group_split = std::make_pair(opt.groups[0], opt.groups[1]);
    }
    cfg.fixed_beta = opt.fixed_beta;
    // Genotypes and phenotype consume separate seed streams so either can be
    // regenerated independently.
    cfg.seed = opt.seed + 1;

    const GenotypeMatrix genotypes = stage("simulating genotypes",
                                           [&]
                                           {
                                               if (opt.structured)
                                               {
                                                   return simulate_structured_genotypes(
                                                       cfg.n, cfg.p, opt.subpops, opt.fst,
                                                       opt.seed);
                                               }
                                               return simulate_genotypes(
                                                   cfg.n, cfg.p, {opt.freq_lo, opt.freq_hi},
                                                   opt.seed);
                                           });
    manifest.add_timing("genotypes", timer.lap());

    const SimTruth truth =
        stage("simulating phenotype", [&] { return simulate_phenotype(genotypes, cfg); });
    manifest.add_timing("phenotype", timer.lap());

    const std::string genotype_path = opt.out_prefix + ".genotypes.tsv";
    const std::string phenotype_path = opt.out_prefix + ".phenotype.tsv";
    const std::string truth_path = opt.out_prefix + ".truth.tsv";
    write_genotypes(genotype_path, genotypes);
    write_phenotype(phenotype_path, truth.y);
    write_truth(truth_path, genotypes, truth);
    manifest.add_output(genotype_path);
    manifest.add_output(phenotype_path);
    manifest.add_output(truth_path);
    manifest.add_timing("write", timer.lap());

    auto& params = manifest.parameters();
    params["n"] = opt.n;
    params["p"] = opt.p;
    params["causal"] = index_json(cfg.causal_indices);
    params["h2"] = opt.h2;
    params["rho"] = opt.rho;
    params["model"] = opt.model;
    params["pcs"] = opt.pcs;
    params["pc_var"] = opt.pc_var;
    params["groups"] = opt.groups;
    params["fixed_beta"] =
        opt.fixed_beta ? nlohmann::json(*opt.fixed_beta) : nlohmann::json(nullptr);
    params["structured"] = opt.structured;
    params["subpops"] = opt.subpops;
    params["fst"] = opt.fst;
    params["freq_range"] = {opt.freq_lo, opt.freq_hi};
    params["variance_report"] = {{"additive", truth.variance_report.additive},
                                 {"interaction", truth.variance_report.interaction},
                                 {"structure", truth.variance_report.structure},
                                 {"noise", truth.variance_report.noise}};
    manifest.write(opt.out_prefix + ".simulate.manifest.json");
}

auto run_rate(const RateOptions& opt) -> void
{
    RunManifest manifest("rate", opt.seed);

    const GenotypeMatrix genotypes = load_genotypes(opt.genotypes, manifest);
    const Eigen::VectorXd y = load_phenotype(opt.phenotype, genotypes.n_samples(), manifest);

    const KernelSpec spec = make_kernel_spec(opt.kernel, opt.bandwidth, opt.jitter);
    GpConfig gp_cfg;
    gp_cfg.n_iter = opt.iterations;
    gp_cfg.burn_in = opt.burn_in;
    gp_cfg.thin = opt.thin;
    gp_cfg.a = opt.gp_a;
    gp_cfg.b = opt.gp_b;
    gp_cfg.seed = opt.seed;
    if (opt.solver == "eigen")
    {
        gp_cfg.solver = GpConfig::Solver::EigenBasis;
    }
    else if (opt.solver == "periter")
    {
        gp_cfg.solver = GpConfig::Solver::PerIteration;
    }
    else
    {
        throw ArgumentError("--solver must be 'eigen' or 'periter', got '" + opt.solver + "'");
    }

    PosteriorDraws draws;
    const EffectSizePosterior post =
        fit_effect_size_posterior(genotypes, y, spec, gp_cfg, opt.sv_cutoff, opt.ridge,
                                  manifest, opt.dump_draws ? &draws : nullptr);

    StageTimer timer;
    const CentralityReport report =
        stage("computing centrality", [&] { return compute_rates(post); });
    manifest.add_timing("centrality", timer.lap());

    const std::string report_path = opt.out_prefix + ".rate.tsv";
    write_centrality_report(report_path, report, genotypes.snp_ids);
    manifest.add_output(report_path);

    if (opt.cascade > 0)
    {
        const std::vector<CentralityReport> steps = stage(
            "centrality cascade",
            [&] { return centrality_cascade(as_conditioned(post), opt.cascade, opt.delta_stop); });
        manifest.add_timing("cascade", timer.lap());
        for (std::size_t s = 0; s < steps.size(); ++s)
        {
            const std::string path =
                opt.out_prefix + ".rate.cascade" + std::to_string(s + 1) + ".tsv";
            write_centrality_report(path, steps[s], genotypes.snp_ids);
            manifest.add_output(path);
        }
    }

    if (!opt.nullify.empty())
    {
        const std::vector<Eigen::Index> order =
            to_zero_based(opt.nullify, genotypes.n_snps(), "--nullify");
        const std::vector<CentralityReport> steps = stage(
            "fixed nullification", [&] { return nullification_path(as_conditioned(post), order); });
        manifest.add_timing("nullification", timer.lap());
        for (std::size_t s = 0; s < steps.size(); ++s)
        {
            const std::string path =
                opt.out_prefix + ".rate.nullify" + std::to_string(s + 1) + ".tsv";
            write_centrality_report(path, steps[s], genotypes.snp_ids);
            manifest.add_output(path);
        }
        manifest.parameters()["nullify"] = index_json(order);
    }

    if (opt.dump_draws)
    {
        const std::string path = opt.out_prefix + ".draws.tsv";
        write_draw_dump(path, draws);
        manifest.add_output(path);
    }

    auto& params = manifest.parameters();
    params["kernel"] = opt.kernel;
    params["bandwidth"] =
        opt.bandwidth ? nlohmann::json(*opt.bandwidth) : nlohmann::json(nullptr);
    params["jitter"] = opt.jitter;
    params["iterations"] = opt.iterations;
    params["burn_in"] = opt.burn_in;
    params["thin"] = opt.thin;
    params["gp_a"] = opt.gp_a;
    params["gp_b"] = opt.gp_b;
    params["solver"] = opt.solver;
    params["sv_cutoff"] = opt.sv_cutoff;
    params["ridge"] = opt.ridge;
    params["cascade"] = opt.cascade;
    params["delta_stop"] = opt.delta_stop;
    manifest.write(opt.out_prefix + ".rate.manifest.json");
}

auto run_scan(const ScanOptions& opt) -> void
{
    RunManifest manifest("scan", 0);

    const GenotypeMatrix genotypes = load_genotypes(opt.genotypes, manifest);
    const Eigen::VectorXd y = load_phenotype(opt.phenotype, genotypes.n_samples(), manifest);

    StageTimer timer;
    const ScanResult scan =
        stage("scanning variants", [&] { return scanone(genotypes.values, y, opt.level); });
    manifest.add_timing("scan", timer.lap());

    const std::string scan_path = opt.out_prefix + ".scan.tsv";
    write_scan_result(scan_path, scan, genotypes.snp_ids);
    manifest.add_output(scan_path);

    manifest.parameters()["level"] = opt.level;
    manifest.write(opt.out_prefix + ".scan.manifest.json");
}

auto run_power(const PowerOptions& opt) -> void
{
    RunManifest manifest("power", opt.seed);

    if (opt.replicates < 1)
    {
        throw ArgumentError("--replicates must be >= 1");
    }
    if (opt.scenario < 1 || opt.scenario > 3)
    {
        throw ArgumentError("--scenario must be 1, 2, or 3");
    }
    if (opt.groups.size() != 2)
    {
        throw ArgumentError("--groups takes exactly two sizes, e.g. --groups 5,25");
    }
    if (opt.groups[0] + opt.groups[1] != opt.causal_count)
    {
        throw ArgumentError("--groups must sum to --causal-count");
    }
    const bool stratified = opt.scenario >= 2;
    const int n_pcs = opt.scenario == 3 ? 10 : 5;

    struct ReplicateResult
    {
        double rate_auc;
        double scan_auc;
        ThresholdPower rate_power;
        ThresholdPower scan_power;
        PowerCurve rate_curve;
        PowerCurve scan_curve;
    };
    std::vector<ReplicateResult> results;
    std::vector<std::string> failures;

    StageTimer timer;
    for (int r = 0; r < opt.replicates; ++r)
    {
        // Per-replicate seed block: genotype, phenotype, causal choice, and
        // Gibbs chain each draw from their own stream.
        const std::uint64_t base = opt.seed + 1000003ULL * static_cast<std::uint64_t>(r + 1);
        try
        {
            const GenotypeMatrix genotypes =
                stratified
                    ? simulate_structured_genotypes(static_cast<Eigen::Index>(opt.n),
                                                    static_cast<Eigen::Index>(opt.p),
                                                    opt.subpops, opt.fst, base)
                    : simulate_genotypes(static_cast<Eigen::Index>(opt.n),
                                         static_cast<Eigen::Index>(opt.p),
                                         {opt.freq_lo, opt.freq_hi}, base);

            SimConfig cfg;
            cfg.n = static_cast<Eigen::Index>(opt.n);
            cfg.p = static_cast<Eigen::Index>(opt.p);
            cfg.h2 = opt.h2;
            cfg.rho = opt.rho;
            cfg.model = stratified ? SimModel::Stratified : SimModel::Standard;
            cfg.n_pcs = stratified ? n_pcs : 0;
            cfg.pc_variance_fraction = stratified ? opt.pc_var : 0.0;
            cfg.seed = base + 1;

            std::vector<Eigen::Index> all_variants(static_cast<std::size_t>(opt.p));
            std::iota(all_variants.begin(), all_variants.end(), Eigen::Index{0});
            std::mt19937_64 causal_rng(base + 2);
            std::sample(all_variants.begin(), all_variants.end(),
                        std::back_inserter(cfg.causal_indices), opt.causal_count, causal_rng);
            std::shuffle(cfg.causal_indices.begin(), cfg.causal_indices.end(), causal_rng);
            if (opt.rho < 1.0)
            {
                cfg.group_split = std::make_pair(opt.groups[0], opt.groups[1]);
            }

            const SimTruth truth = simulate_phenotype(genotypes, cfg);

            KernelSpec spec;
            GpConfig gp_cfg;
            gp_cfg.n_iter = opt.iterations;
            gp_cfg.burn_in = opt.burn_in;
            gp_cfg.seed = base + 3;
            const EffectSizePosterior post = fit_effect_size_posterior(
                genotypes, truth.y, spec, gp_cfg, kDefaultSvCutoff, kDefaultCovarianceRidge,
                manifest);
            const CentralityReport report = compute_rates(post);
            const ScanResult scan = scanone(genotypes.values, truth.y, opt.level);

            ReplicateResult result;
            result.rate_curve = roc_auc(report.rate,
                                        ScoreOrientation::HigherIsMoreSignificant,
                                        cfg.causal_indices);
            result.scan_curve = roc_auc(scan.p_values,
                                        ScoreOrientation::LowerIsMoreSignificant,
                                        cfg.causal_indices);
            result.rate_auc = result.rate_curve.auc;
            result.scan_auc = result.scan_curve.auc;
            result.rate_power = threshold_power(report, cfg.causal_indices);
            result.scan_power = threshold_power(scan, cfg.causal_indices);
            results.push_back(std::move(result));
        }
        catch (const Error& e)
        {
            failures.push_back("replicate " + std::to_string(r + 1) + ": " + e.what());
        }
    }
    manifest.add_timing("replicates", timer.lap());

    if (results.empty())
    {
        throw NumericalError("all " + std::to_string(opt.replicates)
                             + " replicates failed; first failure: " + failures.front());
    }

    std::vector<double> rate_aucs;
    std::vector<double> scan_aucs;
    std::vector<PowerCurve> rate_curves;
    std::vector<PowerCurve> scan_curves;
    std::vector<double> rate_tprs;
    std::vector<double> rate_fprs;
    std::vector<double> scan_tprs;
    std::vector<double> scan_fprs;
    for (const ReplicateResult& result : results)
    {
        rate_aucs.push_back(result.rate_auc);
        scan_aucs.push_back(result.scan_auc);
        rate_curves.push_back(result.rate_curve);
        scan_curves.push_back(result.scan_curve);
        rate_tprs.push_back(result.rate_power.tpr);
        rate_fprs.push_back(result.rate_power.fpr);
        scan_tprs.push_back(result.scan_power.tpr);
        scan_fprs.push_back(result.scan_power.fpr);
    }

    const std::string rate_curve_path = opt.out_prefix + ".power.rate_curve.tsv";
    const std::string scan_curve_path = opt.out_prefix + ".power.scan_curve.tsv";
    write_power_curve(rate_curve_path, mean_curve(rate_curves, mean_of(rate_aucs)));
    write_power_curve(scan_curve_path, mean_curve(scan_curves, mean_of(scan_aucs)));
    manifest.add_output(rate_curve_path);
    manifest.add_output(scan_curve_path);

    const std::string replicate_path = opt.out_prefix + ".power.replicates.tsv";
    {
        std::ofstream out(replicate_path);
        if (!out)
        {
            throw DataError("cannot open '" + replicate_path + "' for writing");
        }
        out << "replicate\trate_auc\tscan_auc\trate_tpr\trate_fpr\tscan_tpr\tscan_fpr\n";
        for (std::size_t i = 0; i < results.size(); ++i)
        {
            out << (i + 1) << '\t' << format_double(rate_aucs[i]) << '\t'
                << format_double(scan_aucs[i]) << '\t' << format_double(rate_tprs[i]) << '\t'
                << format_double(rate_fprs[i]) << '\t' << format_double(scan_tprs[i]) << '\t'
                << format_double(scan_fprs[i]) << '\n';
        }
    }
    manifest.add_output(replicate_path);

    const std::string summary_path = opt.out_prefix + ".power.summary.tsv";
    {
        std::ofstream out(summary_path);
        if (!out)
        {
            throw DataError("cannot open '" + summary_path + "' for writing");
        }
        out << "# scenario=" << opt.scenario << " rho=" << format_double(opt.rho)
            << " replicates=" << results.size() << " failed=" << failures.size() << '\n';
        out << "method\tmean_auc\tse_auc\tmean_tpr_native\tmean_fpr_native\n";
        out << "rate\t" << format_double(mean_of(rate_aucs)) << '\t'
            << format_double(standard_error(rate_aucs)) << '\t'
            << format_double(mean_of(rate_tprs)) << '\t' << format_double(mean_of(rate_fprs))
            << '\n';
        out << "scanone\t" << format_double(mean_of(scan_aucs)) << '\t'
            << format_double(standard_error(scan_aucs)) << '\t'
            << format_double(mean_of(scan_tprs)) << '\t' << format_double(mean_of(scan_fprs))
            << '\n';
    }
    manifest.add_output(summary_path);

    auto& params = manifest.parameters();
    params["replicates"] = opt.replicates;
    params["scenario"] = opt.scenario;
    params["n"] = opt.n;
    params["p"] = opt.p;
    params["causal_count"] = opt.causal_count;
    params["groups"] = opt.groups;
    params["h2"] = opt.h2;
    params["rho"] = opt.rho;
    params["pc_var"] = stratified ? opt.pc_var : 0.0;
    params["pcs"] = stratified ? n_pcs : 0;
    params["subpops"] = opt.subpops;
    params["fst"] = opt.fst;
    params["iterations"] = opt.iterations;
    params["burn_in"] = opt.burn_in;
    params["level"] = opt.level;
    params["failures"] = failures;
    manifest.write(opt.out_prefix + ".power.manifest.json");

    const double failure_fraction =
        static_cast<double>(failures.size()) / static_cast<double>(opt.replicates);
    if (failure_fraction > 0.1)
    {
        throw NumericalError(std::to_string(failures.size()) + " of "
                             + std::to_string(opt.replicates)
                             + " replicates failed; first failure: " + failures.front());
    }
}

}  // namespace rategp::tools
