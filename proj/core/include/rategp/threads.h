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

#pragma once

#include <cstdint>
#include <functional>

namespace rategp
{

/// Worker count used by parallel_for: the RATEGP_THREADS environment
/// variable when set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
int thread_count();

/// Runs fn(i) for every i in [0, count). Tasks must write only to
/// disjoint output slots; the call returns after all tasks finish and
/// rethrows the first exception raised by any task. Runs serially when
/// thread_count() == 1 or count < 2.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

}  // namespace rategp
