#include "gradrel/hashing.hpp"

#include <algorithm>
#include <stdexcept>

namespace gradrel {

namespace {

// seeded FNV-1a over a byte window
std::uint64_t hash_window(const char* data, std::size_t len, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ULL;
    }
    // final avalanche so the low bits used for bucketing are well mixed
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

}  // namespace

double SparseVec::squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

void FeatureHasher::validate() const {
    if (n_gram_sizes.empty()) throw std::invalid_argument("hasher: no n-gram sizes");
    for (int n : n_gram_sizes) {
        if (n < 1) throw std::invalid_argument("hasher: n-gram size must be >= 1");
    }
    if (num_buckets == 0 || (num_buckets & (num_buckets - 1)) != 0) {
        throw std::invalid_argument("hasher: num_buckets must be a power of two");
    }
}

SparseVec FeatureHasher::featurize(const std::string& text) const {
    validate();
    std::vector<std::pair<std::uint32_t, double>> entries;
    const std::uint32_t mask = num_buckets - 1;
    for (int n : n_gram_sizes) {
        const std::size_t un = static_cast<std::size_t>(n);
        if (text.size() < un) continue;
        for (std::size_t i = 0; i + un <= text.size(); ++i) {
            // window hash mixed with n so equal substrings of different
            // lengths land in independent buckets
            const std::uint64_t h =
                hash_window(text.data() + i, un, hash_seed + static_cast<std::uint64_t>(n));
            const auto bucket = static_cast<std::uint32_t>(h & mask);
            const double sign = use_sign ? ((h >> 32) & 1 ? 1.0 : -1.0) : 1.0;
            entries.emplace_back(bucket, sign);
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    for (const auto& [idx, val] : entries) {
        if (!out.indices.empty() && out.indices.back() == idx) {
            out.values.back() += val;
        } else {
            out.indices.push_back(idx);
            out.values.push_back(val);
        }
    }
    // signed accumulation can cancel to exactly zero; drop those entries
    SparseVec compact;
    for (std::size_t i = 0; i < out.indices.size(); ++i) {
        if (out.values[i] != 0.0) {
            compact.indices.push_back(out.indices[i]);
            compact.values.push_back(out.values[i]);
        }
    }
    return compact;
}

double dot(const SparseVec& a, const SparseVec& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.indices.size() && j < b.indices.size()) {
        if (a.indices[i] < b.indices[j]) {
            ++i;
        } else if (a.indices[i] > b.indices[j]) {
            ++j;
        } else {
            s += a.values[i] * b.values[j];
            ++i;
            ++j;
        }
    }
    return s;
}

}  // namespace gradrel
