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

#include "rategp/threads.h"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rategp
{

int thread_count()
{
    if (const char* env = std::getenv("RATEGP_THREADS"))
    {
        const int n = std::atoi(env);
        if (n > 0)
        {
            return n;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn)
{
    if (count <= 0)
    {
        return;
    }

    const int workers = thread_count();
    if (workers == 1 || count < 2)
    {
        for (std::int64_t i = 0; i < count; ++i)
        {
            fn(i);
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]()
    {
        for (;;)
        {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count)
            {
                return;
            }
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                {
                    first_error = std::current_exception();
                }
            }
        }
    };

    const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, count));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t)
    {
        pool.emplace_back(worker);
    }
    for (auto& th : pool)
    {
        th.join();
    }

    if (first_error)
    {
        std::rethrow_exception(first_error);
    }
}

}  // namespace rategp
