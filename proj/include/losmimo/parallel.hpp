// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOSMIMO_PARALLEL_HPP
#define LOSMIMO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace losmimo
{
    // Runs fn(i) for i in [0, n) on up to `workers` threads. Work items are
    // handed out dynamically; callers must make fn(i) depend on i only. The
    // first exception thrown by any item is rethrown after all threads join.
    template <typename Fn>
    void parallel_for(std::size_t n, std::size_t workers, Fn &&fn)
    {
        if (n == 0)
            return;
        workers = std::clamp<std::size_t>(workers, 1, n);
        if (workers == 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;

        auto body = [&] {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load())
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(body);
        body();
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    inline std::size_t default_workers()
    {
        const unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : hc;
    }
}

#endif
