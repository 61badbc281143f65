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

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.h"
#include "rategp/errors.h"

namespace
{

// Exit codes: 0 success, 1 usage error, 2 malformed or inconsistent data,
// 3 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void add_simulate(CLI::App& app, rategp::tools::SimulateOptions& opt)
{
    CLI::App* cmd = app.add_subcommand(
        "simulate", "Generate synthetic genotypes and a phenotype with a known variance budget");
    cmd->add_option("--out", opt.out_prefix, "Output path prefix")->required();
    cmd->add_option("--n", opt.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--p", opt.p, "Number of variants")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--causal", opt.causal, "1-based causal variant indices, comma separated")
        ->delimiter(',');
    cmd->add_option("--h2", opt.h2, "Broad-sense heritability in [0,1)")
        ->capture_default_str();
    cmd->add_option("--rho", opt.rho,
                    "Fraction of genetic variance that is additive, in (0,1]")
        ->capture_default_str();
    cmd->add_option("--model", opt.model, "Generative model: 'standard' or 'stratified'")
        ->capture_default_str();
    cmd->add_option("--pcs", opt.pcs, "Number of genotype principal components (stratified)")
        ->capture_default_str();
    cmd->add_option("--pc-var", opt.pc_var,
                    "Fraction of total variance carried by the PCs (stratified)")
        ->capture_default_str();
    cmd->add_option("--groups", opt.groups,
                    "Two causal group sizes for across-group interactions, e.g. 5,25")
        ->delimiter(',');
    cmd->add_option("--fixed-beta", opt.fixed_beta,
                    "Use this constant for every causal additive effect instead of N(0,1) draws");
    cmd->add_flag("--structured", opt.structured,
                  "Simulate block-structured subpopulation genotypes");
    cmd->add_option("--subpops", opt.subpops, "Number of subpopulations (structured)")
        ->capture_default_str();
    cmd->add_option("--fst", opt.fst, "Subpopulation differentiation in (0,1) (structured)")
        ->capture_default_str();
    cmd->add_option("--freq-lo", opt.freq_lo, "Lower allele-frequency bound (unstructured)")
        ->capture_default_str();
    cmd->add_option("--freq-hi", opt.freq_hi, "Upper allele-frequency bound (unstructured)")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    cmd->callback([&opt] { rategp::tools::run_simulate(opt); });
}

void add_rate(CLI::App& app, rategp::tools::RateOptions& opt)
{
    CLI::App* cmd = app.add_subcommand(
        "rate", "Fit the Gaussian process and rank variants by centrality");
    cmd->add_option("--genotypes", opt.genotypes, "Genotype TSV (header of ids, one row per sample)")
        ->required();
    cmd->add_option("--phenotype", opt.phenotype, "Phenotype TSV (single column)")->required();
    cmd->add_option("--out", opt.out_prefix, "Output path prefix")->required();
    cmd->add_option("--kernel", opt.kernel, "Covariance kernel: 'gaussian' or 'linear'")
        ->capture_default_str();
    cmd->add_option("--bandwidth", opt.bandwidth,
                    "Gaussian kernel bandwidth (default: median heuristic)");
    cmd->add_option("--jitter", opt.jitter, "Diagonal jitter added to the covariance")
        ->capture_default_str();
    cmd->add_option("--iterations", opt.iterations, "Gibbs sweeps")->capture_default_str();
    cmd->add_option("--burn-in", opt.burn_in, "Discarded initial sweeps")->capture_default_str();
    cmd->add_option("--thin", opt.thin, "Keep every thin-th sweep after burn-in")
        ->capture_default_str();
    cmd->add_option("--gp-a", opt.gp_a, "Scaled-inverse-chi-squared prior df for the noise")
        ->capture_default_str();
    cmd->add_option("--gp-b", opt.gp_b, "Scaled-inverse-chi-squared prior scale for the noise")
        ->capture_default_str();
    cmd->add_option("--solver", opt.solver, "Sampler backend: 'eigen' or 'periter'")
        ->capture_default_str();
    cmd->add_option("--sv-cutoff", opt.sv_cutoff,
                    "Relative singular-value cutoff for pseudoinverses")
        ->capture_default_str();
    cmd->add_option("--ridge", opt.ridge,
                    "Relative ridge added to the effect-size covariance diagonal")
        ->capture_default_str();
    cmd->add_option("--cascade", opt.cascade,
                    "Number of greedy nullification steps to report")
        ->capture_default_str();
    cmd->add_option("--nullify", opt.nullify,
                    "1-based variants to nullify in order, comma separated")
        ->delimiter(',');
    cmd->add_option("--delta-stop", opt.delta_stop,
                    "Stop the cascade once delta falls below this value")
        ->capture_default_str();
    cmd->add_flag("--dump-draws", opt.dump_draws, "Also write retained posterior draws");
    cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    cmd->callback([&opt] { rategp::tools::run_rate(opt); });
}

void add_scan(CLI::App& app, rategp::tools::ScanOptions& opt)
{
    CLI::App* cmd = app.add_subcommand(
        "scan", "Per-variant linear regression baseline with Bonferroni threshold");
    cmd->add_option("--genotypes", opt.genotypes, "Genotype TSV (header of ids, one row per sample)")
        ->required();
    cmd->add_option("--phenotype", opt.phenotype, "Phenotype TSV (single column)")->required();
    cmd->add_option("--out", opt.out_prefix, "Output path prefix")->required();
    cmd->add_option("--level", opt.level, "Family-wise significance level")
        ->capture_default_str();
    cmd->callback([&opt] { rategp::tools::run_scan(opt); });
}

void add_power(CLI::App& app, rategp::tools::PowerOptions& opt)
{
    CLI::App* cmd = app.add_subcommand(
        "power", "Replicated simulation study comparing centrality and scan rankings");
    cmd->add_option("--out", opt.out_prefix, "Output path prefix")->required();
    cmd->add_option("--replicates", opt.replicates, "Number of simulated datasets")
        ->capture_default_str();
    cmd->add_option("--scenario", opt.scenario,
                    "1: unstructured; 2: structured with 5 PCs; 3: structured with 10 PCs")
        ->capture_default_str();
    cmd->add_option("--n", opt.n, "Samples per replicate")->capture_default_str();
    cmd->add_option("--p", opt.p, "Variants per replicate")->capture_default_str();
    cmd->add_option("--causal-count", opt.causal_count, "Causal variants per replicate")
        ->capture_default_str();
    cmd->add_option("--groups", opt.groups, "Causal group sizes for interactions, e.g. 5,25")
        ->delimiter(',');
    cmd->add_option("--h2", opt.h2, "Broad-sense heritability")->capture_default_str();
    cmd->add_option("--rho", opt.rho, "Additive fraction of genetic variance")
        ->capture_default_str();
    cmd->add_option("--pc-var", opt.pc_var, "PC variance fraction (scenarios 2 and 3)")
        ->capture_default_str();
    cmd->add_option("--subpops", opt.subpops, "Subpopulations (scenarios 2 and 3)")
        ->capture_default_str();
    cmd->add_option("--fst", opt.fst, "Subpopulation differentiation (scenarios 2 and 3)")
        ->capture_default_str();
    cmd->add_option("--freq-lo", opt.freq_lo, "Lower allele-frequency bound (scenario 1)")
        ->capture_default_str();
    cmd->add_option("--freq-hi", opt.freq_hi, "Upper allele-frequency bound (scenario 1)")
        ->capture_default_str();
    cmd->add_option("--iterations", opt.iterations, "Gibbs sweeps per replicate")
        ->capture_default_str();
    cmd->add_option("--burn-in", opt.burn_in, "Discarded initial sweeps")->capture_default_str();
    cmd->add_option("--level", opt.level, "Scan family-wise significance level")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Base RNG seed")->capture_default_str();
    cmd->callback([&opt] { rategp::tools::run_power(opt); });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Variable prioritization for nonparametric regression via "
                 "posterior centrality measures"};
    app.set_version_flag("--version", std::string(RATEGP_VERSION));
    app.require_subcommand(1);

    rategp::tools::SimulateOptions simulate_opt;
    rategp::tools::RateOptions rate_opt;
    rategp::tools::ScanOptions scan_opt;
    rategp::tools::PowerOptions power_opt;
    add_simulate(app, simulate_opt);
    add_rate(app, rate_opt);
    add_scan(app, scan_opt);
    add_power(app, power_opt);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    catch (const rategp::ArgumentError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const rategp::DataError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    catch (const rategp::NumericalError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
