#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace lqexec {

/// Worker count used by map_paths; 0 selects hardware concurrency.
void set_worker_count(unsigned n) noexcept;
unsigned worker_count() noexcept;

/// Evaluates f(p) for p in [0, n) and returns the results in path order.
///
/// Paths are split into contiguous chunks, one per worker. Each result only
/// depends on its own index, so the output is identical for any worker count.
template <class F>
auto map_paths(std::size_t n, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> out(n);
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t p = 0; p < n; ++p) out[p] = f(p);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers;
        const std::size_t hi = n * (w + 1) / workers;
        threads.emplace_back([&, lo, hi, w] {
            try {
                for (std::size_t p = lo; p < hi; ++p) out[p] = f(p);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace lqexec
