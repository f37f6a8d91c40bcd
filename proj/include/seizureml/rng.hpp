#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace seizureml {

/// All randomness in the library flows through this wrapper. std::mt19937_64 is
/// fully specified by the standard and the helpers below avoid the
/// implementation-defined std distributions, so every draw is reproducible
/// bit-for-bit across platforms and compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, n) via bitmask rejection. n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < n) return v;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_real01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Fisher-Yates shuffle, last position first.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        shuffle(std::span<T>(values));
    }

    /// k distinct values from [0, n), returned in ascending order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives an independent child seed from a master seed and a stream id.
/// Stage seeds, per-model seeds and per-tree seeds all come from here, which is
/// what makes ensemble training independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 1));
}

/// Fixed stream ids for the pipeline stages.
namespace rng_stream {
inline constexpr std::uint64_t kOversample = 1;
inline constexpr std::uint64_t kSplit = 2;
inline constexpr std::uint64_t kModelBase = 16;  // + model index
}  // namespace rng_stream

inline std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    // Partial Fisher-Yates over an index array, then sort the prefix.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace seizureml
