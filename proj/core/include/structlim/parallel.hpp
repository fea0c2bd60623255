#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace structlim {

/// Caps the worker pool used by parallel operations. 0 means
/// "hardware concurrency". Exact-mode results never depend on this value.
void set_thread_limit(int threads);
int thread_limit();

/// Splits [begin, end) into chunks, runs `work` on each chunk from a worker
/// pool, and combines the per-chunk results in chunk order. Because merging
/// happens in a fixed order, the result is independent of the thread count
/// whenever `merge` itself is (all uses here merge sets, sums, or maxima).
template <typename T>
T parallel_chunk_reduce(std::int64_t begin, std::int64_t end, T init,
                        const std::function<T(std::int64_t, std::int64_t)>& work,
                        const std::function<T(T, T)>& merge) {
    const std::int64_t total = end - begin;
    if (total <= 0) return init;
    int workers = thread_limit();
    if (workers <= 0) workers = 1;
    // Several small chunks per worker keeps the load balanced.
    std::int64_t chunks = static_cast<std::int64_t>(workers) * 4;
    if (chunks > total) chunks = total;
    if (workers == 1 || chunks <= 1) {
        return merge(std::move(init), work(begin, end));
    }
    const std::int64_t step = (total + chunks - 1) / chunks;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::int64_t b = begin + c * step;
        std::int64_t e = b + step < end ? b + step : end;
        if (b >= e) break;
        ranges.emplace_back(b, e);
    }
    std::vector<T> results(ranges.size());
    std::vector<std::exception_ptr> errors(ranges.size());
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers && w < static_cast<int>(ranges.size()); ++w) {
        pool.emplace_back([&]() {
            while (true) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= ranges.size()) break;
                try {
                    results[i] = work(ranges[i].first, ranges[i].second);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // Rethrow the earliest chunk's failure so errors are as deterministic
    // as the results.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    T acc = std::move(init);
    for (auto& r : results) acc = merge(std::move(acc), std::move(r));
    return acc;
}

} // namespace structlim
