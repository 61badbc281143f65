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

#include "manifest.h"

#include <chrono>
#include <fstream>

#include "rategp/errors.h"
#include "rategp/io.h"

#ifndef RATEGP_VERSION
#define RATEGP_VERSION "unknown"
#endif

namespace rategp::tools
{

RunManifest::RunManifest(std::string command, std::uint64_t seed)
    : command_(std::move(command)), seed_(seed), parameters_(nlohmann::json::object())
{
}

auto RunManifest::add_input(const std::string& path) -> void
{
    input_digests_[path] = digest_file(path);
}

auto RunManifest::add_output(const std::string& path) -> void
{
    output_digests_[path] = digest_file(path);
}

auto RunManifest::add_timing(const std::string& stage, double seconds) -> void
{
    timings_[stage] = seconds;
}

auto RunManifest::write(const std::string& path) const -> void
{
    nlohmann::json doc;
    doc["command"] = command_;
    doc["version"] = RATEGP_VERSION;
    doc["seed"] = seed_;
    doc["parameters"] = parameters_;
    doc["inputs"] = input_digests_;
    doc["outputs"] = output_digests_;
    doc["timings_sec"] = timings_;

    std::ofstream out(path);
    if (!out)
    {
        throw DataError("cannot open '" + path + "' for writing");
    }
    out << doc.dump(2) << '\n';
    if (!out)
    {
        throw DataError("write to '" + path + "' failed");
    }
}

namespace
{

std::int64_t steady_now_ns()
{
    const auto now = std::chrono::steady_clock::now().time_since_epoch();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(now).count();
}

}  // namespace

StageTimer::StageTimer() : last_ns_(steady_now_ns()) {}

auto StageTimer::lap() -> double
{
    const std::int64_t now_ns = steady_now_ns();
    const double seconds = static_cast<double>(now_ns - last_ns_) * 1e-9;
    last_ns_ = now_ns;
    return seconds;
}

}  // namespace rategp::tools
