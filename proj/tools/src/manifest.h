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

#ifndef RATEGP_TOOLS_MANIFEST_H_
#define RATEGP_TOOLS_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

namespace rategp::tools
{

// Reproducibility record written next to every command's outputs: the
// resolved parameter values, content digests of all inputs and outputs, and
// wall-clock per pipeline stage.  Re-running the same build with the same
// parameters reproduces every output digest; only the timings differ.
class RunManifest
{
public:
    RunManifest(std::string command, std::uint64_t seed);

    auto parameters() -> nlohmann::json& { return parameters_; }

    // Records the FNV-1a digest of an existing file.
    auto add_input(const std::string& path) -> void;
    auto add_output(const std::string& path) -> void;
    auto add_timing(const std::string& stage, double seconds) -> void;

    auto write(const std::string& path) const -> void;

private:
    std::string command_;
    std::uint64_t seed_;
    nlohmann::json parameters_;
    std::map<std::string, std::string> input_digests_;
    std::map<std::string, std::string> output_digests_;
    std::map<std::string, double> timings_;
};

// Wall-clock helper: returns seconds elapsed since the last call (or
// construction) for stage timing.
class StageTimer
{
public:
    StageTimer();

    auto lap() -> double;

private:
    std::int64_t last_ns_;
};

}  // namespace rategp::tools

#endif  // RATEGP_TOOLS_MANIFEST_H_
