#include "lqexec/parallel.hpp"

#include <atomic>

namespace lqexec {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned n) noexcept {
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    g_workers.store(n);
}

unsigned worker_count() noexcept { return g_workers.load(); }

}  // namespace lqexec
