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

// Microbenchmarks for the stages of the centrality pipeline: covariance
// construction, the Gibbs sampler, projection/summary, and the centrality
// computation itself.

#include <cstdint>

#include <benchmark/benchmark.h>
#include <Eigen/Dense>

#include "rategp/genotype.h"
#include "rategp/gp.h"
#include "rategp/kernel.h"
#include "rategp/projection.h"
#include "rategp/rate.h"
#include "rategp/simdata.h"

namespace
{

using namespace rategp;

GenotypeMatrix make_genotypes(Eigen::Index n, Eigen::Index p)
{
    return simulate_genotypes(n, p, {0.05, 0.5}, 42);
}

SimTruth make_phenotype(const GenotypeMatrix& g)
{
    SimConfig cfg;
    cfg.n = g.n_samples();
    cfg.p = g.n_snps();
    cfg.causal_indices = {g.n_snps() - 3, g.n_snps() - 2, g.n_snps() - 1};
    cfg.h2 = 0.6;
    cfg.rho = 1.0;
    cfg.seed = 43;
    return simulate_phenotype(g, cfg);
}

void bm_build_covariance(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const GenotypeMatrix g = make_genotypes(n, 25);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(build_covariance(g.values, KernelSpec{}));
    }
}
BENCHMARK(bm_build_covariance)->Arg(200)->Arg(500)->Arg(1000);

void bm_gibbs_fit(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const GenotypeMatrix g = make_genotypes(n, 25);
    const SimTruth truth = make_phenotype(g);
    const CovarianceMatrix k = build_covariance(g.values, KernelSpec{});
    GpConfig cfg;
    cfg.n_iter = 2000;
    cfg.burn_in = 200;
    cfg.seed = 7;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(gibbs_fit(truth.y, k, cfg));
    }
}
BENCHMARK(bm_gibbs_fit)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void bm_gibbs_fit_per_iteration_solver(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const GenotypeMatrix g = make_genotypes(n, 25);
    const SimTruth truth = make_phenotype(g);
    const CovarianceMatrix k = build_covariance(g.values, KernelSpec{});
    GpConfig cfg;
    cfg.n_iter = 2000;
    cfg.burn_in = 200;
    cfg.seed = 7;
    cfg.solver = GpConfig::Solver::PerIteration;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(gibbs_fit(truth.y, k, cfg));
    }
}
BENCHMARK(bm_gibbs_fit_per_iteration_solver)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_project_and_summarize(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const GenotypeMatrix g = make_genotypes(n, 25);
    const SimTruth truth = make_phenotype(g);
    const CovarianceMatrix k = build_covariance(g.values, KernelSpec{});
    GpConfig cfg;
    cfg.n_iter = 2000;
    cfg.burn_in = 200;
    cfg.seed = 7;
    const PosteriorDraws draws = gibbs_fit(truth.y, k, cfg);
    for (auto _ : state)
    {
        const Eigen::MatrixXd beta = project_draws(g.values, draws);
        benchmark::DoNotOptimize(summarize_posterior(beta));
    }
}
BENCHMARK(bm_project_and_summarize)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void bm_compute_rates(benchmark::State& state)
{
    const auto p = static_cast<Eigen::Index>(state.range(0));
    const auto n = 4 * p;
    const GenotypeMatrix g = make_genotypes(n, p);
    const SimTruth truth = make_phenotype(g);
    const CovarianceMatrix k = build_covariance(g.values, KernelSpec{});
    GpConfig cfg;
    cfg.n_iter = 2000;
    cfg.burn_in = 200;
    cfg.seed = 7;
    const PosteriorDraws draws = gibbs_fit(truth.y, k, cfg);
    const EffectSizePosterior post = summarize_posterior(project_draws(g.values, draws));
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(compute_rates(post));
    }
}
BENCHMARK(bm_compute_rates)->Arg(25)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_median_heuristic(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const GenotypeMatrix g = make_genotypes(n, 25);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(median_heuristic(g.values));
    }
}
BENCHMARK(bm_median_heuristic)->Arg(200)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
