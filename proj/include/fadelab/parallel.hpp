// SPDX-License-Identifier: Apache-2.0
//
// fadelab: statistics of fading channels with multiple specular components
// Copyright (C) 2026 The fadelab authors
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

#ifndef FADELAB_PARALLEL_HPP
#define FADELAB_PARALLEL_HPP

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace fadelab
{

// Worker count: FADELAB_THREADS if set to a positive integer, otherwise the hardware concurrency.
inline unsigned thread_count()
{
    if (const char *env = std::getenv("FADELAB_THREADS"))
    {
        try
        {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(std::min(v, 1024L));
        }
        catch (const std::exception &)
        {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n). Each index is handled by exactly one worker, so results
// written per index do not depend on the worker count. The exception from the lowest
// failing index is rethrown after all workers finish.
template <typename F>
void parallel_for(std::size_t n, F &&fn, unsigned threads = thread_count())
{
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&](unsigned t) {
        for (std::size_t i = t; i < n; i += threads)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 1)
        worker(0);
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (auto &th : pool)
            th.join();
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

template <typename F>
auto parallel_map(std::size_t n, F &&fn, unsigned threads = thread_count())
{
    using R = std::invoke_result_t<F &, std::size_t>;
    std::vector<R> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); }, threads);
    return out;
}

} // namespace fadelab

#endif
