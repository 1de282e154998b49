#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace g2r {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Small deterministic generator.  We roll our own stream so that reports are
// byte-identical for a given seed independent of the standard library.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // decorrelate trivially different seeds
        for (int i = 0; i < 4; ++i) splitmix64(state_);
    }

    uint64_t next() { return splitmix64(state_); }

    // uniform on [0, n), n > 0, rejection sampled
    uint64_t below(uint64_t n) {
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

    // uniform on [lo, hi] inclusive
    int64_t range(int64_t lo, int64_t hi) {
        return lo + (int64_t)below((uint64_t)(hi - lo + 1));
    }

    bool coin() { return next() & 1u; }

    // independent child stream; used to keep per-sample work order-free
    static Rng child(uint64_t seed, uint64_t index) {
        uint64_t s = seed;
        splitmix64(s);
        s ^= 0x6a09e667f3bcc909ull + index * 0x9e3779b97f4a7c15ull;
        return Rng(s);
    }

private:
    uint64_t state_;
};

// Runs fn(i) for i in [0, count) on `workers` threads.  Each index is
// independent; callers aggregate results from a pre-sized vector afterwards,
// so output is deterministic regardless of the worker count.
inline void parallel_for(size_t count, unsigned workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    unsigned n = std::min<unsigned>(workers, (unsigned)count);
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += n) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline uint64_t env_u64(const char* name, uint64_t fallback) {
    const char* v = std::getenv(name);
    if (!v || !*v) return fallback;
    return std::strtoull(v, nullptr, 10);
}

// shared guard: largest prime admitted for reduction/counting work
inline uint64_t prime_guard_max() { return env_u64("G2RANK_GUARD_PRIME_MAX", 1000); }

}  // namespace g2r
