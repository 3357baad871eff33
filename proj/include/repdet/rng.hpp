#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace repdet {

// SplitMix64 stream. Small, fast, and bit-identical on every platform, which
// is what the reproducibility contract needs; std::mt19937 + distributions
// are not portable across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound); bound must be > 0.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

// Derives an independent stream seed from a master seed and a stream ordinal.
// All per-round / per-document seeds in the pipeline flow through this.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    Rng rng(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    return rng.next();
}

// First k entries of a seeded uniform permutation of [0, n). Partial
// Fisher-Yates; order of the returned sample is the draw order.
inline std::vector<int32_t> sample_without_replacement(int32_t n, int32_t k, Rng& rng) {
    std::vector<int32_t> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    if (k > n) k = n;
    for (int32_t i = 0; i < k; ++i) {
        int32_t j = i + static_cast<int32_t>(rng.below(static_cast<uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<size_t>(k));
    return pool;
}

}  // namespace repdet
