#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace abcsg {

inline unsigned default_thread_count() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs body(i) for every i in [0, count), rows interleaved over `threads`
// workers. Results must be written to per-index slots so the outcome does not
// depend on the thread count. If bodies throw, the exception from the lowest
// failing index is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> failed_at(workers, std::numeric_limits<std::size_t>::max());
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += workers) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        failed_at[w] = i;
                        return;
                    }
                }
            });
        }
    }
    const auto first = std::min_element(failed_at.begin(), failed_at.end()) - failed_at.begin();
    if (errors[first]) std::rethrow_exception(errors[first]);
}

}  // namespace abcsg
