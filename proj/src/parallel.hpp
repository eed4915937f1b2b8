#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace noisyodds::detail {

inline constexpr std::uint64_t kChunkSize = 1u << 16;

// Splits [0, total) into fixed chunks, evaluates `work(first, last)` for up to
// `threads` chunks at a time, and feeds each result to `merge` in chunk order.
// Chunk boundaries never depend on the thread count, so neither does the output.
template <class Work, class Merge>
void for_each_chunk(std::uint64_t total, unsigned threads, Work work, Merge merge)
{
    using Result = decltype(work(std::uint64_t{}, std::uint64_t{}));
    const std::uint64_t chunks = (total + kChunkSize - 1) / kChunkSize;
    threads = std::max(1u, threads);
    std::vector<Result> results(threads);
    for (std::uint64_t wave = 0; wave < chunks; wave += threads) {
        const auto in_wave = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks - wave));
        const auto bounds = [&](unsigned i) {
            const std::uint64_t first = (wave + i) * kChunkSize;
            return std::pair{first, std::min(total, first + kChunkSize)};
        };
        if (in_wave == 1) {
            const auto [first, last] = bounds(0);
            results[0] = work(first, last);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(in_wave);
            for (unsigned i = 0; i < in_wave; ++i) {
                pool.emplace_back([&, i] {
                    const auto [first, last] = bounds(i);
                    results[i] = work(first, last);
                });
            }
            for (auto& t : pool) {
                t.join();
            }
        }
        for (unsigned i = 0; i < in_wave; ++i) {
            merge(std::move(results[i]));
        }
    }
}

// Welford running moments with the pairwise (Chan) merge.
struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) noexcept
    {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningMoments& o) noexcept
    {
        if (o.n == 0) {
            return;
        }
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.n) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

}  // namespace noisyodds::detail
