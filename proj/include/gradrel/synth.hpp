#pragma once
// Deterministic synthetic multilingual corpora with ground-truth graded
// relevance and configurable annotator noise.
//
// Generative structure: passages are grouped into topics. Passages in a topic
// share topic tokens (and optionally a pivot token whose surface form is
// identical across languages). Each passage carries a private token, two facts
// shared with its topic neighbours, and random filler tokens. A query targets
// one shared fact of one source passage, which fixes the true grades of its
// candidate list: 3 = source, 2 = the passage sharing the target fact,
// 1 = same topic only, 0 = disjoint.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "gradrel/core.hpp"

namespace gradrel {

// 4x4 row-stochastic matrix: row = true score, column = observed score.
struct ConfusionMatrix {
    std::array<std::array<double, kNumGrades>, kNumGrades> rows{};

    static ConfusionMatrix identity();
    // Throws if a row does not sum to 1 +- 1e-9 or has a negative entry.
    void validate() const;
    bool is_identity() const;
};

struct NoiseProfile {
    std::map<ResourceTier, ConfusionMatrix> by_tier;

    static NoiseProfile clean() { return {}; }
    const ConfusionMatrix& for_tier(ResourceTier tier) const;
    void validate() const;
};

struct SynthConfig {
    std::uint64_t seed = 0;
    std::vector<LanguageTag> languages;
    std::size_t passages_per_language = 0;
    std::size_t queries_per_language = 0;
    std::size_t candidates_per_query = 5;  // k
    std::map<ResourceTier, std::size_t> vocab_size_by_tier = {
        {ResourceTier::low, 300},
        {ResourceTier::medium, 1000},
        {ResourceTier::high, 3000},
        {ResourceTier::very_high, 8000},
    };
    std::size_t pivot_token_count = 16;  // 0 disables shared pivots
    NoiseProfile noise_profile;

    // Throws std::invalid_argument when the config cannot realize all four
    // grades (vocab too small, too few passages, k/queries too small).
    void validate() const;
};

struct SynthOutput {
    std::vector<Query> queries;
    std::vector<Passage> passages;
    // Ground-truth judgments, annotator_id = "truth". Exactly k per query,
    // exactly one score 3 per query.
    std::vector<GradedInstance> true_instances;

    std::map<std::pair<std::string, std::string>, int> oracle_scores() const;
    Dataset as_dataset() const { return Dataset{queries, passages, true_instances}; }
};

inline const char* kTruthAnnotator = "truth";

// Pure function of config: same config yields byte-identical output.
SynthOutput generate(const SynthConfig& config);

// Fresh query set over the corpus implied by `config`, with ids under
// `id_prefix` and randomness derived from (config.seed, salt). Passages are
// not returned; they equal generate(config).passages.
SynthOutput generate_queries(const SynthConfig& config, std::size_t per_language,
                             const std::string& salt, const std::string& id_prefix);

// Draw observed scores from the confusion row of each true score.
std::vector<GradedInstance> annotate_synthetic(const std::vector<GradedInstance>& true_instances,
                                               const NoiseProfile& profile,
                                               const std::string& annotator_id,
                                               std::uint64_t seed);

}  // namespace gradrel
