#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace refnoise {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count) across `threads` workers in contiguous
// blocks. fn must only write to slots it owns; results must not depend
// on execution order.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
    threads = std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(count, 1));
    if (threads <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr first_error;
    std::atomic_flag error_claimed = ATOMIC_FLAG_INIT;
    const std::int64_t block = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t begin = t * block;
        const std::int64_t end = std::min(count, begin + block);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn, &first_error, &error_claimed] {
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                if (!error_claimed.test_and_set()) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace refnoise
