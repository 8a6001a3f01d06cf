#pragma once
// Hashed character n-gram features: deterministic sparse vectors with signed
// bucket hashing.

#include <cstdint>
#include <string>
#include <vector>

namespace gradrel {

struct SparseVec {
    // index-sorted, unique indices, accumulated values
    std::vector<std::uint32_t> indices;
    std::vector<double> values;

    std::size_t nnz() const { return indices.size(); }
    double squared_norm() const;
};

struct FeatureHasher {
    std::vector<int> n_gram_sizes = {2, 3, 4};
    std::uint32_t num_buckets = 1u << 15;  // power of two
    std::uint64_t hash_seed = 0;
    bool use_sign = true;  // +-1 sign hashing

    void validate() const;
    SparseVec featurize(const std::string& text) const;
};

double dot(const SparseVec& a, const SparseVec& b);

}  // namespace gradrel
