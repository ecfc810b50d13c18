#ifndef PENSION_DETAIL_PARALLEL_HPP
#define PENSION_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace pension::detail {

/// Runs body(begin, end) over disjoint chunks of [0, n). Workers write only
/// to slots they own, so the schedule cannot affect results. Exceptions from
/// workers are rethrown on the calling thread.
template <class Body>
void parallel_for_paths(long n, unsigned threads, Body&& body) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned want = threads != 0 ? threads : (hw != 0 ? hw : 1u);
    long n_workers = std::min<long>(want, std::max<long>(n, 1));
    if (n_workers <= 1) {
        body(0L, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_workers));
    const long chunk = (n + n_workers - 1) / n_workers;
    for (long w = 0; w < n_workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min(n, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                if (begin < end) body(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace pension::detail

#endif  // PENSION_DETAIL_PARALLEL_HPP
