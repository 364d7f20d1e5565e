/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_PARALLEL_HPP
#define MMWCOV_PARALLEL_HPP

#include <thread>
#include <vector>

namespace mmwcov {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(worker, index) for every index in [0, n) across worker threads.
/// Work items must write only to their own slots; results are then
/// independent of the thread count.
template <typename Fn>
void parallel_for(long n, int threads, const Fn& fn) {
    const long t = std::min<long>(resolve_threads(threads), n);
    if (t <= 1) {
        for (long i = 0; i < n; ++i) fn(0, i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (long w = 0; w < t; ++w) {
        const long lo = n * w / t;
        const long hi = n * (w + 1) / t;
        pool.emplace_back([&fn, w, lo, hi] {
            for (long i = lo; i < hi; ++i) fn(static_cast<int>(w), i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mmwcov

#endif  // MMWCOV_PARALLEL_HPP
