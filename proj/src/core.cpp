#include "gradrel/core.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace gradrel {

std::string to_string(ResourceTier tier) {
    switch (tier) {
        case ResourceTier::low: return "low";
        case ResourceTier::medium: return "medium";
        case ResourceTier::high: return "high";
        case ResourceTier::very_high: return "very_high";
    }
    throw std::logic_error("unreachable tier");
}

ResourceTier tier_from_string(const std::string& s) {
    if (s == "low") return ResourceTier::low;
    if (s == "medium") return ResourceTier::medium;
    if (s == "high") return ResourceTier::high;
    if (s == "very_high") return ResourceTier::very_high;
    throw std::invalid_argument("unknown resource tier: " + s);
}

LanguageTag LanguageTag::make(std::string code, ResourceTier tier) {
    if (code.empty() || code.size() > 8) {
        throw std::invalid_argument("language code must be 1..8 characters: '" + code + "'");
    }
    for (char c : code) {
        if (c >= 'A' && c <= 'Z') {
            throw std::invalid_argument("language code must be lowercase: '" + code + "'");
        }
    }
    return LanguageTag{std::move(code), tier};
}

namespace {

std::string instance_key(const GradedInstance& gi) {
    return gi.query_id + "\t" + gi.passage_id + "\t" + gi.annotator_id;
}

}  // namespace

ValidationReport validate_dataset(const std::vector<GradedInstance>& instances,
                                  const std::vector<Query>& queries,
                                  const std::vector<Passage>& passages) {
    ValidationReport report;

    std::unordered_map<std::string, const Query*> query_by_id;
    std::unordered_map<std::string, const Passage*> passage_by_id;

    std::set<std::string> duplicates;  // ordered so report sets are canonical
    for (const auto& q : queries) {
        if (!query_by_id.emplace(q.id, &q).second) {
            duplicates.insert("query:" + q.id);
        }
    }
    for (const auto& p : passages) {
        if (!passage_by_id.emplace(p.id, &p).second) {
            duplicates.insert("passage:" + p.id);
        }
    }

    std::set<std::string> dangling;
    std::set<std::string> mismatches;
    std::unordered_set<std::string> seen_instances;
    std::unordered_set<std::string> annotated_queries;
    for (const auto& gi : instances) {
        if (!seen_instances.insert(instance_key(gi)).second) {
            duplicates.insert("instance:" + gi.query_id + "/" + gi.passage_id + "/" +
                              gi.annotator_id);
        }
        auto qit = query_by_id.find(gi.query_id);
        if (qit == query_by_id.end()) {
            dangling.insert("query:" + gi.query_id);
        } else {
            annotated_queries.insert(gi.query_id);
            if (!(qit->second->language == gi.language)) {
                mismatches.insert("instance " + gi.query_id + "/" + gi.passage_id +
                                  " tagged '" + gi.language.code + "' but query is '" +
                                  qit->second->language.code + "'");
            }
        }
        if (passage_by_id.find(gi.passage_id) == passage_by_id.end()) {
            dangling.insert("passage:" + gi.passage_id);
        }
    }

    std::set<std::string> unannotated;
    for (const auto& q : queries) {
        if (annotated_queries.find(q.id) == annotated_queries.end()) {
            unannotated.insert(q.id);
        }
    }

    report.dangling_references.assign(dangling.begin(), dangling.end());
    report.duplicate_keys.assign(duplicates.begin(), duplicates.end());
    report.language_mismatches.assign(mismatches.begin(), mismatches.end());
    report.unannotated_queries.assign(unannotated.begin(), unannotated.end());
    return report;
}

}  // namespace gradrel
