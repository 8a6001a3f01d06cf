#pragma once
// Brute-force cosine retrieval over a unit-norm passage index, plus graded
// ranking metrics (nDCG@k primary, recall@k diagnostic) and the run/qrels
// file formats.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradrel/core.hpp"
#include "gradrel/encoder.hpp"

namespace gradrel {

struct PassageIndex {
    std::vector<std::string> ids;      // unique, parallel to embedding rows
    std::vector<double> embeddings;    // row-major n x dim, unit-norm rows
    std::size_t dim = 0;
    std::optional<std::string> language;  // filter metadata

    std::size_t size() const { return ids.size(); }
    void validate() const;
};

// Embed every passage with a frozen model.
PassageIndex build_index(const EncoderParams& params, const std::vector<Passage>& passages,
                         const std::optional<std::string>& language_filter = std::nullopt);

struct ScoredPassage {
    std::string passage_id;
    double similarity;
};

// Exact top-k by cosine; ties broken by ascending passage id.
std::vector<ScoredPassage> search(const PassageIndex& index,
                                  const std::vector<double>& query_embedding,
                                  std::size_t cutoff);

struct Qrels {
    // (query_id, passage_id) -> grade; unjudged pairs implicitly grade 0
    std::map<std::pair<std::string, std::string>, int> judgments;

    int grade(const std::string& qid, const std::string& pid) const;
    std::vector<int> judged_grades(const std::string& qid) const;
};

struct RunResult {
    std::map<std::string, std::vector<ScoredPassage>> ranked;  // per query
};

enum class GainFunction { exponential, linear };

struct NdcgResult {
    std::map<std::string, double> per_query;
    double macro_average = 0.0;
    std::size_t zero_idcg_queries = 0;  // scored 0 and counted separately
};

NdcgResult ndcg_at_k(const RunResult& run, const Qrels& qrels, std::size_t k = 10,
                     GainFunction gain = GainFunction::exponential);

struct RecallResult {
    std::map<std::string, double> per_query;
    double macro_average = 0.0;
    std::size_t vacuous_queries = 0;  // no relevant passage exists; scored 1.0
};

RecallResult recall_at_k(const RunResult& run, const Qrels& qrels, Threshold tau_eval,
                         std::size_t k);

// Run files: "query_id<TAB>passage_id<TAB>rank<TAB>similarity" (6 decimals).
void write_run(const RunResult& run, const std::string& path);
RunResult read_run(const std::string& path);

// Qrels files: "query_id<TAB>passage_id<TAB>score".
void write_qrels(const Qrels& qrels, const std::string& path);
Qrels read_qrels(const std::string& path);

Qrels qrels_from_instances(const std::vector<GradedInstance>& instances);

}  // namespace gradrel
