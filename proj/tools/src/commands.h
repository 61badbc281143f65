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

#ifndef RATEGP_TOOLS_COMMANDS_H_
#define RATEGP_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rategp::tools
{

// Variable indices on the command line are 1-based; they are converted to
// 0-based internally and the manifest records both.

struct SimulateOptions
{
    std::string out_prefix;
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::vector<std::int64_t> causal;  ///< 1-based
    double h2 = 0.6;
    double rho = 1.0;
    std::string model = "standard";  ///< standard | stratified
    int pcs = 0;
    double pc_var = 0.0;
    std::vector<int> groups;  ///< optional (g1, g2) causal split
    std::optional<double> fixed_beta;
    bool structured = false;
    int subpops = 3;
    double fst = 0.1;
    double freq_lo = 0.05;
    double freq_hi = 0.5;
    std::uint64_t seed = 0;
};

struct RateOptions
{
    std::string genotypes;
    std::string phenotype;
    std::string out_prefix;
    std::string kernel = "gaussian";  ///< gaussian | linear
    std::optional<double> bandwidth;
    double jitter = 1e-6;
    int iterations = 10000;
    int burn_in = 1000;
    int thin = 1;
    double gp_a = 5.0;
    double gp_b = 0.4;
    std::string solver = "eigen";  ///< eigen | periter
    double sv_cutoff = 1e-10;
    double ridge = 1e-6;
    int cascade = 0;
    std::vector<std::int64_t> nullify;  ///< 1-based fixed nullification order
    double delta_stop = 0.01;
    bool dump_draws = false;
    std::uint64_t seed = 0;
};

struct ScanOptions
{
    std::string genotypes;
    std::string phenotype;
    std::string out_prefix;
    double level = 0.05;
};

struct PowerOptions
{
    std::string out_prefix;
    int replicates = 20;
    int scenario = 1;  ///< 1: standard; 2: stratified, 5 PCs; 3: stratified, 10 PCs
    std::int64_t n = 500;
    std::int64_t p = 200;
    int causal_count = 30;
    std::vector<int> groups = {5, 25};  ///< causal split for cross-group interactions
    double h2 = 0.3;
    double rho = 1.0;
    double pc_var = 0.3;
    int subpops = 3;
    double fst = 0.1;
    double freq_lo = 0.05;
    double freq_hi = 0.5;
    int iterations = 10000;
    int burn_in = 1000;
    double level = 0.05;
    std::uint64_t seed = 0;
};

auto run_simulate(const SimulateOptions& opt) -> void;
auto run_rate(const RateOptions& opt) -> void;
auto run_scan(const ScanOptions& opt) -> void;
auto run_power(const PowerOptions& opt) -> void;

}  // namespace rategp::tools

#endif  // RATEGP_TOOLS_COMMANDS_H_
