#include "gradrel/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace gradrel {

void PassageIndex::validate() const {
    if (embeddings.size() != ids.size() * dim) {
        throw std::invalid_argument("index: embedding shape mismatch");
    }
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) throw std::invalid_argument("index: duplicate id " + id);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        double sq = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            const double v = embeddings[i * dim + r];
            sq += v * v;
        }
        if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) {
            throw std::invalid_argument("index: row for " + ids[i] + " is not unit-norm");
        }
    }
}

PassageIndex build_index(const EncoderParams& params, const std::vector<Passage>& passages,
                         const std::optional<std::string>& language_filter) {
    PassageIndex index;
    index.dim = params.dim;
    index.language = language_filter;
    for (const auto& p : passages) {
        if (language_filter && p.language.code != *language_filter) continue;
        auto e = embed(params, params.hasher.featurize(p.text));
        index.ids.push_back(p.id);
        index.embeddings.insert(index.embeddings.end(), e.begin(), e.end());
    }
    return index;
}

std::vector<ScoredPassage> search(const PassageIndex& index,
                                  const std::vector<double>& query_embedding,
                                  std::size_t cutoff) {
    if (index.size() == 0) throw std::invalid_argument("search: empty index");
    if (cutoff < 1) throw std::invalid_argument("search: cutoff must be >= 1");
    if (query_embedding.size() != index.dim) {
        throw std::invalid_argument("search: query dimension mismatch");
    }
    std::vector<std::size_t> order(index.size());
    std::vector<double> sims(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        order[i] = i;
        double d = 0.0;
        const double* row = index.embeddings.data() + i * index.dim;
        for (std::size_t r = 0; r < index.dim; ++r) d += row[r] * query_embedding[r];
        sims[i] = d;
    }
    const std::size_t k = std::min(cutoff, index.size());
    auto better = [&](std::size_t a, std::size_t b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return index.ids[a] < index.ids[b];
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      better);
    std::vector<ScoredPassage> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back({index.ids[order[i]], sims[order[i]]});
    return out;
}

int Qrels::grade(const std::string& qid, const std::string& pid) const {
    auto it = judgments.find({qid, pid});
    return it == judgments.end() ? 0 : it->second;
}

std::vector<int> Qrels::judged_grades(const std::string& qid) const {
    std::vector<int> grades;
    for (auto it = judgments.lower_bound({qid, ""});
         it != judgments.end() && it->first.first == qid; ++it) {
        grades.push_back(it->second);
    }
    return grades;
}

namespace {

double gain_of(int grade, GainFunction gain) {
    return gain == GainFunction::exponential
               ? static_cast<double>((1 << grade) - 1)
               : static_cast<double>(grade);
}

double dcg(const std::vector<double>& gains, std::size_t k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < gains.size() && i < k; ++i) {
        sum += gains[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    return sum;
}

}  // namespace

NdcgResult ndcg_at_k(const RunResult& run, const Qrels& qrels, std::size_t k,
                     GainFunction gain) {
    NdcgResult result;
    double total = 0.0;
    for (const auto& [qid, ranked] : run.ranked) {
        std::vector<double> ranked_gains;
        for (const auto& sp : ranked) ranked_gains.push_back(gain_of(qrels.grade(qid, sp.passage_id), gain));

        std::vector<int> judged = qrels.judged_grades(qid);
        std::sort(judged.rbegin(), judged.rend());
        std::vector<double> ideal_gains;
        for (int g : judged) ideal_gains.push_back(gain_of(g, gain));

        const double idcg = dcg(ideal_gains, k);
        double value = 0.0;
        if (idcg > 0.0) {
            value = dcg(ranked_gains, k) / idcg;
        } else {
            result.zero_idcg_queries += 1;
        }
        result.per_query[qid] = value;
        total += value;
    }
    result.macro_average = run.ranked.empty() ? 0.0 : total / static_cast<double>(run.ranked.size());
    return result;
}

RecallResult recall_at_k(const RunResult& run, const Qrels& qrels, Threshold tau_eval,
                         std::size_t k) {
    RecallResult result;
    double total = 0.0;
    for (const auto& [qid, ranked] : run.ranked) {
        std::set<std::string> relevant;
        for (auto it = qrels.judgments.lower_bound({qid, ""});
             it != qrels.judgments.end() && it->first.first == qid; ++it) {
            if (it->second >= tau_eval.tau()) relevant.insert(it->first.second);
        }
        double value;
        if (relevant.empty()) {
            value = 1.0;  // vacuous, flagged
            result.vacuous_queries += 1;
        } else {
            std::size_t hit = 0;
            for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
                if (relevant.count(ranked[i].passage_id) != 0) ++hit;
            }
            value = static_cast<double>(hit) / static_cast<double>(relevant.size());
        }
        result.per_query[qid] = value;
        total += value;
    }
    result.macro_average = run.ranked.empty() ? 0.0 : total / static_cast<double>(run.ranked.size());
    return result;
}

void write_run(const RunResult& run, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[64];
    for (const auto& [qid, ranked] : run.ranked) {
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.6f", ranked[i].similarity);
            out << qid << "\t" << ranked[i].passage_id << "\t" << (i + 1) << "\t" << buf << "\n";
        }
    }
}

RunResult read_run(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    RunResult run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string qid, pid;
        std::size_t rank;
        double sim;
        if (!(is >> qid >> pid >> rank >> sim)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed run line");
        }
        auto& ranked = run.ranked[qid];
        if (rank != ranked.size() + 1) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": rank out of sequence for query " + qid);
        }
        ranked.push_back({pid, sim});
    }
    return run;
}

void write_qrels(const Qrels& qrels, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& [key, score] : qrels.judgments) {
        out << key.first << "\t" << key.second << "\t" << score << "\n";
    }
}

Qrels read_qrels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Qrels q;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string qid, pid;
        int score;
        if (!(is >> qid >> pid >> score)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed qrels line");
        }
        RelevanceScore checked(score);  // rejects out-of-scale grades
        q.judgments[{qid, pid}] = checked.value();
    }
    return q;
}

Qrels qrels_from_instances(const std::vector<GradedInstance>& instances) {
    Qrels q;
    for (const auto& gi : instances) {
        q.judgments[{gi.query_id, gi.passage_id}] = gi.score.value();
    }
    return q;
}

}  // namespace gradrel
