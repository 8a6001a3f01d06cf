#pragma once
// Distribution-matched downsampling across languages, mixture construction,
// and nested size ladders. All operations sort by instance key before
// sampling, so results depend only on (input multiset, seed).

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gradrel/core.hpp"

namespace gradrel {

struct SampledSplit {
    std::vector<GradedInstance> instances;
    std::size_t target_total = 0;  // per language
    // language -> score -> count, recomputed from `instances`
    std::map<std::string, std::map<int, std::size_t>> per_language_counts;
};

struct MixtureSpec {
    LanguageTag target_language;
    std::size_t target_count = 0;
    std::optional<LanguageTag> additional_language;
    std::size_t additional_count = 0;
    std::uint64_t seed = 0;
};

// Three-step procedure: (1) m = min over languages of count(score > 0);
// (2) per language, sample exactly m non-zero instances uniformly;
// (3) fill each language with zero-score instances up to target_total.
SampledSplit distribution_matched_downsample(const std::vector<GradedInstance>& instances,
                                             std::size_t target_total, std::uint64_t seed);

// Uniform subsample per language, concatenated and shuffled.
std::vector<GradedInstance> build_mixture(const std::vector<GradedInstance>& instances,
                                          const MixtureSpec& spec);

// Nested subsets: each larger set contains every smaller one.
// Set independent_resampling to draw each size separately instead.
std::vector<std::vector<GradedInstance>> size_ladder(const std::vector<GradedInstance>& split,
                                                     const std::vector<std::size_t>& sizes,
                                                     std::uint64_t seed,
                                                     bool independent_resampling = false);

// Per-language per-score counts, for manifests and tests.
std::map<std::string, std::map<int, std::size_t>> count_by_language_and_score(
    const std::vector<GradedInstance>& instances);

// JSON manifest recording seed and before/after counts, for provenance.
std::string sampling_manifest_json(const std::vector<GradedInstance>& before,
                                   const SampledSplit& after, std::uint64_t seed);

}  // namespace gradrel
