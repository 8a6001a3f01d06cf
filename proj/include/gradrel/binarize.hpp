#pragma once
// Threshold binarization of graded instances into contrastive supervision,
// with class-balance diagnostics. Imbalance is reported, never corrected.

#include <map>
#include <string>
#include <vector>

#include "gradrel/core.hpp"

namespace gradrel {

struct LanguageBalance {
    std::size_t positives = 0;
    std::size_t negatives = 0;
    double positive_ratio() const {
        const std::size_t total = positives + negatives;
        return total == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(total);
    }
};

struct ContrastiveSet {
    std::vector<std::pair<std::string, std::string>> positives;  // (query_id, passage_id)
    std::vector<std::pair<std::string, std::string>> negatives;
    Threshold tau{1};
    std::string annotator_id;
    std::map<std::string, LanguageBalance> balance_by_language;
    // Queries that contribute only negatives at this tau.
    std::vector<std::string> queries_without_positives;
    bool empty_input = false;

    std::string balance_json() const;
};

// Partition: score >= tau -> positive, score < tau -> negative.
// Throws if an instance carries a different annotator_id than requested.
ContrastiveSet binarize(const std::vector<GradedInstance>& instances, Threshold tau,
                        const std::string& annotator_id);

}  // namespace gradrel
