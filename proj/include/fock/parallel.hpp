#pragma once

// Deterministic reductions. Work is cut into fixed-size blocks whose shape
// depends only on the problem size; threads only decide who computes which
// block, so sums are bit-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace fock {

namespace detail {
inline std::atomic<int>& thread_count_slot() {
    static std::atomic<int> count{1};
    return count;
}
} // namespace detail

inline void set_thread_count(int count) { detail::thread_count_slot() = std::max(1, count); }
inline int thread_count() { return detail::thread_count_slot().load(); }

inline constexpr std::size_t kReductionBlock = 2048;

/// Recursive pairwise summation with a fixed split rule.
inline double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Runs body(block) for block in [0, blocks) on the configured number of threads.
template <class Body>
void for_each_block(std::size_t blocks, Body&& body) {
    const auto workers = static_cast<std::size_t>(std::min<long long>(thread_count(), static_cast<long long>(blocks)));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < blocks; b = next++) body(b);
        });
    }
    for (auto& t : pool) t.join();
}

/// Sum of value_at(i) for i in [0, count) with a thread-count independent reduction tree.
template <class ValueAt>
double deterministic_sum(std::size_t count, ValueAt&& value_at) {
    if (count == 0) return 0.0;
    const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(blocks, 0.0);
    for_each_block(blocks, [&](std::size_t b) {
        const std::size_t begin = b * kReductionBlock;
        const std::size_t end = std::min(count, begin + kReductionBlock);
        std::vector<double> local(end - begin);
        for (std::size_t i = begin; i < end; ++i) local[i - begin] = value_at(i);
        partial[b] = pairwise_sum(local);
    });
    return pairwise_sum(partial);
}

/// values[i] = value_at(i), computed in parallel blocks.
template <class ValueAt>
std::vector<double> deterministic_map(std::size_t count, ValueAt&& value_at) {
    std::vector<double> out(count, 0.0);
    const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
    for_each_block(blocks, [&](std::size_t b) {
        const std::size_t begin = b * kReductionBlock;
        const std::size_t end = std::min(count, begin + kReductionBlock);
        for (std::size_t i = begin; i < end; ++i) out[i] = value_at(i);
    });
    return out;
}

} // namespace fock
