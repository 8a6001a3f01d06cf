#pragma once
// Shared domain vocabulary: queries, passages, graded judgments, languages,
// thresholds, and dataset validation.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradrel {

// Graded relevance on the closed 0..3 scale. Anything else is rejected.
class RelevanceScore {
  public:
    explicit RelevanceScore(int value) : value_{value} {
        if (value < 0 || value > 3) {
            throw std::invalid_argument("relevance score must be in 0..3, got " +
                                        std::to_string(value));
        }
    }
    int value() const { return value_; }
    bool operator==(const RelevanceScore& o) const { return value_ == o.value_; }
    bool operator<(const RelevanceScore& o) const { return value_ < o.value_; }

  private:
    int value_;
};

inline constexpr int kNumGrades = 4;

enum class ResourceTier { low, medium, high, very_high };

std::string to_string(ResourceTier tier);
ResourceTier tier_from_string(const std::string& s);

struct LanguageTag {
    std::string code;  // non-empty, lowercase, <= 8 chars
    ResourceTier tier = ResourceTier::medium;

    static LanguageTag make(std::string code, ResourceTier tier = ResourceTier::medium);
    bool operator==(const LanguageTag& o) const { return code == o.code; }
    bool operator<(const LanguageTag& o) const { return code < o.code; }
};

struct Query {
    std::string id;
    std::string text;
    LanguageTag language;
};

struct Passage {
    std::string id;
    std::string text;
    LanguageTag language;
};

// One (query, passage, score) judgment by one annotator.
struct GradedInstance {
    std::string query_id;
    std::string passage_id;
    RelevanceScore score{0};
    LanguageTag language;
    std::string annotator_id;
};

// Binarization cutoff. tau=0 would make every instance positive, so it is
// rejected along with everything outside 1..3.
class Threshold {
  public:
    explicit Threshold(int tau) : tau_{tau} {
        if (tau < 1 || tau > 3) {
            throw std::invalid_argument("threshold must be in 1..3, got " +
                                        std::to_string(tau));
        }
    }
    int tau() const { return tau_; }
    bool operator==(const Threshold& o) const { return tau_ == o.tau_; }

  private:
    int tau_;
};

struct Dataset {
    std::vector<Query> queries;
    std::vector<Passage> passages;
    std::vector<GradedInstance> instances;
};

struct ValidationReport {
    // Each entry names the offending key so reports are diffable.
    std::vector<std::string> dangling_references;
    std::vector<std::string> duplicate_keys;
    std::vector<std::string> language_mismatches;
    // Queries with zero annotated passages. Permitted, but surfaced so
    // downstream drops are visible.
    std::vector<std::string> unannotated_queries;

    bool accepted() const {
        return dangling_references.empty() && duplicate_keys.empty() &&
               language_mismatches.empty();
    }
    std::size_t issue_count() const {
        return dangling_references.size() + duplicate_keys.size() +
               language_mismatches.size();
    }
};

// Pure, order-independent: permuting instances yields the same report set.
ValidationReport validate_dataset(const std::vector<GradedInstance>& instances,
                                  const std::vector<Query>& queries,
                                  const std::vector<Passage>& passages);

inline ValidationReport validate_dataset(const Dataset& ds) {
    return validate_dataset(ds.instances, ds.queries, ds.passages);
}

}  // namespace gradrel
