#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace heis {

namespace detail {
inline int threads_from_env() {
    if (const char* s = std::getenv("HEIS_GMT_THREADS")) {
        const int n = std::atoi(s);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> n{threads_from_env()};
    return n;
}
}  // namespace detail

inline int thread_count() { return detail::thread_setting().load(); }
inline void set_thread_count(int n) { detail::thread_setting().store(n > 0 ? n : 1); }

// Sum with a balanced binary tree; result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) noexcept {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

// Runs body(begin, end, chunk_index) over fixed chunks of [0, n). The chunking depends
// only on n and grain, never on the number of workers.
template <class Body>
void parallel_chunks(std::size_t n, std::size_t grain, Body&& body) {
    if (n == 0) return;
    grain = std::max<std::size_t>(grain, 1);
    const std::size_t chunks = (n + grain - 1) / grain;
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c * grain, std::min(n, (c + 1) * grain), c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c * grain, std::min(n, (c + 1) * grain), c);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(chunks);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    for (int i = 1; i < workers; ++i) pool.emplace_back(run);
    run();
    pool.clear();
    if (err) std::rethrow_exception(err);
}

// Deterministic sum of f(i) over [0, n): per-chunk sums, then a pairwise tree over chunks.
template <class F>
double parallel_sum(std::size_t n, std::size_t grain, F&& f) {
    grain = std::max<std::size_t>(grain, 1);
    std::vector<double> partial((n + grain - 1) / grain, 0.0);
    parallel_chunks(n, grain, [&](std::size_t b, std::size_t e, std::size_t c) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += f(i);
        partial[c] = s;
    });
    return pairwise_sum(partial);
}

}  // namespace heis
