#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace vb {

// Runs body(i) for i in [0, count) on up to `workers` threads. Work items are
// claimed dynamically; callers write results into per-index slots and reduce
// in index order, which keeps outputs independent of the worker count.
template <class Body>
void parallel_for(std::uint64_t count, unsigned workers, const Body& body) {
    const auto threads = static_cast<unsigned>(
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, count)));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::uint64_t i = next++; i < count; i = next++) {
                body(i);
            }
        });
    }
}

// Independent generator for (seed, stream); the same pair always yields the
// same sequence.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace vb
