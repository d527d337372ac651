#ifndef FNCOMP_PARALLEL_HPP
#define FNCOMP_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace fncomp {

// Worker count: hardware concurrency capped by FNCOMP_THREADS.
inline int worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? int(hw) : 1;
    if (const char* env = std::getenv("FNCOMP_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

// Runs fn(i) for i in [0,n) on a small pool. Task i owns result slot i, so the
// merge order (and therefore every report) is independent of the pool size.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
    long workers = std::min<long>(worker_count(), n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (long w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            long i;
            while ((i = next.fetch_add(1)) < n && !failed.load()) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fncomp

#endif
