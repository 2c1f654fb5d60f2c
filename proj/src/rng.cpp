// SPDX-License-Identifier: Apache-2.0
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


#include "simswipt/rng.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace simswipt
{
    void parallel_for(Index n, int workers, const std::function<void(Index)> &fn)
    {
        if (n <= 0)
            return;
        const Index threads = std::clamp<Index>(workers, 1, n);
        if (threads == 1)
        {
            for (Index i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<Index> next{0};
        std::mutex error_mutex;
        Index error_index = n;
        std::exception_ptr error;

        auto worker = [&]
        {
            for (Index i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    // keep the lowest failing index so the reported error
                    // does not depend on scheduling
                    std::lock_guard lock(error_mutex);
                    if (i < error_index)
                    {
                        error_index = i;
                        error = std::current_exception();
                    }
                }
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (Index t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        pool.clear();
        if (error)
            std::rethrow_exception(error);
    }
}
