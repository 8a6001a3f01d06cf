#include "gradrel/binarize.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace gradrel {

ContrastiveSet binarize(const std::vector<GradedInstance>& instances, Threshold tau,
                        const std::string& annotator_id) {
    ContrastiveSet set;
    set.tau = tau;
    set.annotator_id = annotator_id;
    set.empty_input = instances.empty();

    std::set<std::string> with_positive;
    std::set<std::string> all_queries;
    for (const auto& gi : instances) {
        if (gi.annotator_id != annotator_id) {
            throw std::invalid_argument("binarize: instance " + gi.query_id + "/" +
                                        gi.passage_id + " carries annotator '" +
                                        gi.annotator_id + "', expected '" + annotator_id + "'");
        }
        all_queries.insert(gi.query_id);
        auto& bal = set.balance_by_language[gi.language.code];
        if (gi.score.value() >= tau.tau()) {
            set.positives.emplace_back(gi.query_id, gi.passage_id);
            with_positive.insert(gi.query_id);
            bal.positives += 1;
        } else {
            set.negatives.emplace_back(gi.query_id, gi.passage_id);
            bal.negatives += 1;
        }
    }
    for (const auto& qid : all_queries) {
        if (with_positive.count(qid) == 0) set.queries_without_positives.push_back(qid);
    }
    return set;
}

std::string ContrastiveSet::balance_json() const {
    nlohmann::ordered_json j;
    j["tau"] = tau.tau();
    j["annotator"] = annotator_id;
    j["positives"] = positives.size();
    j["negatives"] = negatives.size();
    j["empty_input"] = empty_input;
    nlohmann::ordered_json langs;
    for (const auto& [code, bal] : balance_by_language) {
        langs[code] = {{"positives", bal.positives},
                       {"negatives", bal.negatives},
                       {"positive_ratio", bal.positive_ratio()}};
    }
    j["by_language"] = langs;
    j["queries_without_positives"] = queries_without_positives.size();
    return j.dump(2);
}

}  // namespace gradrel
