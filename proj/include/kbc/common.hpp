#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace kbc {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// All randomness flows from one master seed through named streams, so a run
// is reproducible from the seed alone.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a64(stream)) ^ index);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::string_view stream,
                                std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(master, stream, index));
}

// Splits [0, n) into contiguous chunks, one per worker thread. Workers must
// write to disjoint slots; results are then independent of scheduling.
inline void parallel_chunks(std::size_t n, unsigned n_threads,
                            const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (n_threads == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n_threads = hw ? hw : 1;
    }
    if (static_cast<std::size_t>(n_threads) > n) n_threads = static_cast<unsigned>(n);
    if (n_threads <= 1) {
        body(0, n);
        return;
    }
    std::size_t chunk = (n + n_threads - 1) / n_threads;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        std::size_t hi = std::min(lo + chunk, n);
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

}  // namespace kbc
