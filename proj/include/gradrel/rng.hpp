#pragma once
// Deterministic randomness helpers. All sampling in the toolkit goes through
// these so a fixed seed yields byte-identical output regardless of standard
// library distribution internals.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gradrel {

using Rng = std::mt19937_64;

// 64-bit FNV-1a. Used to derive sub-seeds from a master seed plus a label,
// so adding experiment cells never perturbs existing ones.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
    return fnv1a64(std::to_string(master) + "|" + label);
}

// Unbiased integer in [0, n) via rejection sampling on the raw 64-bit stream.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates, implemented locally so shuffles are stable across toolchains.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct indices from [0, n), in shuffled order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    // partial Fisher-Yates: first k positions are the sample
    for (std::size_t i = 0; i < k && i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k < n ? k : n);
    return idx;
}

// Draw an index from a discrete distribution given row probabilities.
inline int sample_discrete(const std::vector<double>& probs, Rng& rng) {
    double u = uniform_unit(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace gradrel
