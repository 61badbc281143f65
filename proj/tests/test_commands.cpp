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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include "rategp/io.h"

namespace rategp
{
namespace
{

std::string binary_path()
{
    const char* env = std::getenv("RATEGP_BIN");
    REQUIRE(env != nullptr);
    return env;
}

int run_cli(const std::string& args)
{
    const std::string cmd = binary_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

class TempDir
{
  public:
    TempDir()
    {
        root_ = std::filesystem::temp_directory_path()
                / ("rategp_cli_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(root_);
    }
    ~TempDir() { std::filesystem::remove_all(root_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (root_ / name).string(); }

  private:
    std::filesystem::path root_;
};

// One shared tiny dataset for the pipeline tests.
struct Dataset
{
    TempDir dir;
    std::string prefix;

    Dataset() : prefix(dir.path("sim"))
    {
        const int code = run_cli("simulate --out " + prefix
                                 + " --n 150 --p 10 --causal 8,9,10 --h2 0.6 --seed 31");
        REQUIRE(code == 0);
    }

    std::string genotypes() const { return prefix + ".genotypes.tsv"; }
    std::string phenotype() const { return prefix + ".phenotype.tsv"; }
};

TEST_CASE("version and help exit cleanly")
{
    REQUIRE(run_cli("--version") == 0);
    REQUIRE(run_cli("--help") == 0);
    REQUIRE(run_cli("rate --help") == 0);
}

TEST_CASE("usage problems exit with code 1")
{
    REQUIRE(run_cli("") == 1);
    REQUIRE(run_cli("frobnicate") == 1);
    REQUIRE(run_cli("simulate --out x") == 1);            // missing required flags
    REQUIRE(run_cli("simulate --out x --n 10 --p abc") == 1);
    TempDir dir;
    REQUIRE(run_cli("simulate --out " + dir.path("x")
                    + " --n 50 --p 8 --causal 9 --seed 1")
            == 1);  // causal index out of range
    REQUIRE(run_cli("simulate --out " + dir.path("x")
                    + " --n 50 --p 8 --causal 1 --h2 1.5 --seed 1")
            == 1);
}

TEST_CASE("missing or malformed data files exit with code 2")
{
    TempDir dir;
    REQUIRE(run_cli("rate --genotypes " + dir.path("nope.tsv") + " --phenotype "
                    + dir.path("nope2.tsv") + " --out " + dir.path("out"))
            == 2);

    const std::string bad = dir.path("bad.tsv");
    {
        std::ofstream out(bad);
        out << "a\tb\n1\tnot_a_number\n";
    }
    const std::string pheno = dir.path("y.tsv");
    {
        std::ofstream out(pheno);
        out << "1.0\n2.0\n";
    }
    REQUIRE(run_cli("scan --genotypes " + bad + " --phenotype " + pheno + " --out "
                    + dir.path("out"))
            == 2);
}

TEST_CASE("numerical dead ends exit with code 3")
{
    TempDir dir;
    // A constant zero effect vector cannot be rescaled to carry positive
    // variance; the failure is numerical, not a usage or file problem.
    REQUIRE(run_cli("simulate --out " + dir.path("x")
                    + " --n 60 --p 6 --causal 1,2 --h2 0.5 --fixed-beta 0 --seed 3")
            == 3);
}

TEST_CASE("simulate writes the three data files plus a manifest")
{
    Dataset data;
    REQUIRE(std::filesystem::exists(data.genotypes()));
    REQUIRE(std::filesystem::exists(data.phenotype()));
    REQUIRE(std::filesystem::exists(data.prefix + ".truth.tsv"));

    const std::string manifest_path = data.prefix + ".simulate.manifest.json";
    REQUIRE(std::filesystem::exists(manifest_path));
    std::ifstream in(manifest_path);
    const nlohmann::json manifest = nlohmann::json::parse(in);
    REQUIRE(manifest["command"] == "simulate");
    REQUIRE(manifest["seed"] == 31);
    REQUIRE(manifest["parameters"]["causal"]["one_based"] == nlohmann::json({8, 9, 10}));
    REQUIRE(manifest["parameters"]["causal"]["zero_based"] == nlohmann::json({7, 8, 9}));
    REQUIRE(manifest["outputs"].size() == 3);
    for (const auto& [file, digest] : manifest["outputs"].items())
    {
        REQUIRE(digest.get<std::string>() == digest_file(file));
    }
}

TEST_CASE("simulate is deterministic for a fixed seed")
{
    TempDir dir;
    const std::string args = " --n 80 --p 6 --causal 5,6 --h2 0.4 --rho 0.5 --seed 17";
    REQUIRE(run_cli("simulate --out " + dir.path("a") + args) == 0);
    REQUIRE(run_cli("simulate --out " + dir.path("b") + args) == 0);
    for (const std::string name : {".genotypes.tsv", ".phenotype.tsv", ".truth.tsv"})
    {
        REQUIRE(digest_file(dir.path("a") + name) == digest_file(dir.path("b") + name));
    }
}

TEST_CASE("the full pipeline runs and its reports agree across methods")
{
    Dataset data;
    const std::string fit = data.dir.path("fit");
    REQUIRE(run_cli("rate --genotypes " + data.genotypes() + " --phenotype "
                    + data.phenotype() + " --out " + fit
                    + " --iterations 2000 --burn-in 200 --cascade 2 --delta-stop 0"
                      " --nullify 8 --dump-draws --seed 41")
            == 0);
    REQUIRE(std::filesystem::exists(fit + ".rate.tsv"));
    REQUIRE(std::filesystem::exists(fit + ".rate.cascade1.tsv"));
    REQUIRE(std::filesystem::exists(fit + ".rate.cascade2.tsv"));
    REQUIRE(std::filesystem::exists(fit + ".rate.nullify1.tsv"));
    REQUIRE(std::filesystem::exists(fit + ".draws.tsv"));
    REQUIRE(std::filesystem::exists(fit + ".rate.manifest.json"));

    REQUIRE(run_cli("scan --genotypes " + data.genotypes() + " --phenotype "
                    + data.phenotype() + " --out " + fit)
            == 0);
    REQUIRE(std::filesystem::exists(fit + ".scan.tsv"));

    // Cross-method sanity on strongly additive data: the variants the
    // centrality report flags overlap the scan's three smallest p-values.
    const auto parse_rows = [](const std::string& path)
    {
        std::ifstream in(path);
        std::vector<std::vector<std::string>> rows;
        std::string line;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#' || line.rfind("variable_id", 0) == 0)
            {
                continue;
            }
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, '\t'))
            {
                fields.push_back(field);
            }
            rows.push_back(fields);
        }
        return rows;
    };

    std::set<std::string> flagged;
    for (const auto& row : parse_rows(fit + ".rate.tsv"))
    {
        REQUIRE(row.size() == 4);
        if (row[3] == "1")
        {
            flagged.insert(row[0]);
        }
    }

    std::vector<std::pair<double, std::string>> scan_rows;
    for (const auto& row : parse_rows(fit + ".scan.tsv"))
    {
        REQUIRE(row.size() == 4);
        scan_rows.emplace_back(std::stod(row[3]), row[0]);
    }
    REQUIRE(scan_rows.size() == 10);
    std::sort(scan_rows.begin(), scan_rows.end());
    std::set<std::string> scan_top;
    for (int i = 0; i < 3; ++i)
    {
        scan_top.insert(scan_rows[static_cast<std::size_t>(i)].second);
    }

    REQUIRE_FALSE(flagged.empty());
    std::set<std::string> overlap;
    std::set_intersection(flagged.begin(), flagged.end(), scan_top.begin(), scan_top.end(),
                          std::inserter(overlap, overlap.begin()));
    REQUIRE_FALSE(overlap.empty());
}

TEST_CASE("linear-kernel fits agree with the scan on additive data")
{
    Dataset data;
    const std::string fit = data.dir.path("linear");
    REQUIRE(run_cli("rate --genotypes " + data.genotypes() + " --phenotype "
                    + data.phenotype() + " --out " + fit
                    + " --kernel linear --iterations 2000 --burn-in 200 --seed 43")
            == 0);
    REQUIRE(std::filesystem::exists(fit + ".rate.tsv"));

    std::ifstream in(fit + ".rate.manifest.json");
    const nlohmann::json manifest = nlohmann::json::parse(in);
    REQUIRE(manifest["parameters"]["kernel"] == "linear");
    REQUIRE(manifest["parameters"]["resolved_bandwidth"].is_null());
}

TEST_CASE("power runs deterministically and summarizes both methods")
{
    TempDir dir;
    const std::string args =
        " --replicates 2 --scenario 2 --n 120 --p 40 --causal-count 12 --groups 2,10"
        " --h2 0.4 --rho 0.5 --iterations 800 --burn-in 100 --seed 51";
    REQUIRE(run_cli("power --out " + dir.path("a") + args) == 0);
    REQUIRE(run_cli("power --out " + dir.path("b") + args) == 0);

    for (const std::string name : {".power.summary.tsv", ".power.rate_curve.tsv",
                                   ".power.scan_curve.tsv", ".power.replicates.tsv"})
    {
        REQUIRE(std::filesystem::exists(dir.path("a") + name));
        REQUIRE(digest_file(dir.path("a") + name) == digest_file(dir.path("b") + name));
    }

    std::ifstream in(dir.path("a") + ".power.summary.tsv");
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    REQUIRE(content.find("\nrate\t") != std::string::npos);
    REQUIRE(content.find("\nscanone\t") != std::string::npos);
    REQUIRE(content.find("failed=0") != std::string::npos);

    REQUIRE(run_cli("power --out " + dir.path("c") + " --replicates 0") == 1);
    REQUIRE(run_cli("power --out " + dir.path("c") + " --scenario 9 --replicates 1") == 1);
}

}  // namespace
}  // namespace rategp
