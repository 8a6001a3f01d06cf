#include "gradrel/synth.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gradrel/rng.hpp"

namespace gradrel {

ConfusionMatrix ConfusionMatrix::identity() {
    ConfusionMatrix m;
    for (int i = 0; i < kNumGrades; ++i) m.rows[i][i] = 1.0;
    return m;
}

void ConfusionMatrix::validate() const {
    for (int i = 0; i < kNumGrades; ++i) {
        double sum = 0.0;
        for (int j = 0; j < kNumGrades; ++j) {
            if (rows[i][j] < 0.0) {
                throw std::invalid_argument("confusion matrix entry < 0 at row " +
                                            std::to_string(i));
            }
            sum += rows[i][j];
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument("confusion matrix row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

bool ConfusionMatrix::is_identity() const {
    for (int i = 0; i < kNumGrades; ++i) {
        for (int j = 0; j < kNumGrades; ++j) {
            if (rows[i][j] != (i == j ? 1.0 : 0.0)) return false;
        }
    }
    return true;
}

const ConfusionMatrix& NoiseProfile::for_tier(ResourceTier tier) const {
    static const ConfusionMatrix kIdentity = ConfusionMatrix::identity();
    auto it = by_tier.find(tier);
    return it == by_tier.end() ? kIdentity : it->second;
}

void NoiseProfile::validate() const {
    for (const auto& [tier, m] : by_tier) {
        (void)tier;
        m.validate();
    }
}

namespace {

constexpr std::size_t kTopicSize = 4;       // passages per topic
constexpr std::size_t kFillersPerPassage = 2;
constexpr std::size_t kMinFillerPool = 16;  // distinct filler choices required

// Pronounceable-ish token from a hash: alternating consonant/vowel.
std::string token_from_hash(std::uint64_t h, const std::string& prefix) {
    static const char consonants[] = "bcdfghjklmnprstvz";
    static const char vowels[] = "aeiou";
    std::string s = prefix;
    for (int i = 0; i < 3; ++i) {
        s += consonants[h % 17];
        h /= 17;
        s += vowels[h % 5];
        h /= 5;
    }
    return s;
}

std::string lang_token(const std::string& code, std::size_t idx) {
    return token_from_hash(fnv1a64(code + "#tok#" + std::to_string(idx)), code);
}

std::string pivot_token(std::size_t idx) {
    return token_from_hash(fnv1a64("pivot#" + std::to_string(idx)), "pv");
}

std::string zpad(std::size_t n, int width) {
    std::string s = std::to_string(n);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

struct TopicLayout {
    std::size_t first_passage;  // global passage index within the language
    std::size_t size;           // kTopicSize, last topic may be larger
};

struct LanguageCorpus {
    std::vector<Passage> passages;
    std::vector<TopicLayout> topics;
    // token index bookkeeping for queries
    std::vector<std::string> topic_token0;            // per topic
    std::vector<std::vector<std::string>> shared_fact;   // per topic, per slot
    std::vector<std::vector<std::string>> private_tok;   // per topic, per slot
};

std::size_t unique_tokens_needed(std::size_t num_topics, std::size_t passages) {
    // per topic: 2 topic tokens; per passage: 1 shared fact + 1 private token
    return num_topics * 2 + passages * 2;
}

std::vector<LanguageTag> sorted_languages(const SynthConfig& config) {
    auto langs = config.languages;
    std::sort(langs.begin(), langs.end());
    return langs;
}

LanguageCorpus build_corpus(const SynthConfig& config, const LanguageTag& lang) {
    const std::size_t n = config.passages_per_language;
    const std::size_t num_topics = n / kTopicSize;
    LanguageCorpus corpus;

    // deterministic in config alone; fillers use a language-scoped stream
    Rng rng(derive_seed(config.seed, "corpus|" + lang.code));

    std::size_t next_token = 0;
    auto fresh = [&] { return lang_token(lang.code, next_token++); };
    const std::size_t unique_used = unique_tokens_needed(num_topics, n);
    const std::size_t vocab = config.vocab_size_by_tier.at(lang.tier);
    const std::size_t filler_pool = vocab - unique_used;  // validated upstream

    std::size_t passage_idx = 0;
    for (std::size_t t = 0; t < num_topics; ++t) {
        const std::size_t size = (t + 1 == num_topics) ? n - t * kTopicSize : kTopicSize;
        corpus.topics.push_back(TopicLayout{passage_idx, size});

        const std::string topic0 = fresh();
        const std::string topic1 = fresh();
        corpus.topic_token0.push_back(topic0);

        std::vector<std::string> facts(size), privates(size);
        for (std::size_t i = 0; i < size; ++i) facts[i] = fresh();
        for (std::size_t i = 0; i < size; ++i) privates[i] = fresh();

        for (std::size_t i = 0; i < size; ++i) {
            std::ostringstream text;
            text << topic0 << " " << topic1;
            if (config.pivot_token_count > 0) {
                text << " " << pivot_token(t % config.pivot_token_count);
            }
            // facts[i] is shared with the next passage in the topic ring
            text << " " << facts[i] << " " << facts[(i + size - 1) % size];
            text << " " << privates[i];
            for (std::size_t f = 0; f < kFillersPerPassage; ++f) {
                text << " " << lang_token(lang.code,
                                          unique_used + uniform_below(rng, filler_pool));
            }
            Passage p;
            p.id = lang.code + ":p" + zpad(passage_idx, 6);
            p.text = text.str();
            p.language = lang;
            corpus.passages.push_back(std::move(p));
            ++passage_idx;
        }
        corpus.shared_fact.push_back(std::move(facts));
        corpus.private_tok.push_back(std::move(privates));
    }
    return corpus;
}

// Grade plan for the k candidate slots of query number q. Slot grades beyond
// the source rotate when k is too small to hold all four grades at once.
std::vector<int> candidate_grades(std::size_t k, std::size_t q) {
    std::vector<int> grades{3};
    if (k >= 4) {
        grades.push_back(2);
        grades.push_back(1);
        while (grades.size() < k) grades.push_back(0);
    } else if (k == 3) {
        grades.push_back(2);
        grades.push_back(q % 2 == 0 ? 1 : 0);
    } else {  // k == 2
        grades.push_back(static_cast<int>(2 - q % 3));
    }
    return grades;
}

void make_queries(const SynthConfig& config, const LanguageTag& lang,
                  const LanguageCorpus& corpus, std::size_t count, Rng& rng,
                  const std::string& id_prefix, SynthOutput& out) {
    const std::size_t k = config.candidates_per_query;
    const std::size_t num_topics = corpus.topics.size();
    for (std::size_t qn = 0; qn < count; ++qn) {
        const std::size_t t = uniform_below(rng, num_topics);
        const TopicLayout& topic = corpus.topics[t];
        const std::size_t i = uniform_below(rng, topic.size);
        const std::size_t source = topic.first_passage + i;
        const std::size_t partner = topic.first_passage + (i + 1) % topic.size;
        const std::size_t topic_mate = topic.first_passage + (i + 2) % topic.size;

        Query q;
        q.id = lang.code + ":" + id_prefix + zpad(qn, 6);
        std::ostringstream text;
        text << corpus.shared_fact[t][i] << " " << corpus.private_tok[t][i] << " "
             << corpus.topic_token0[t];
        if (config.pivot_token_count > 0) {
            text << " " << pivot_token(t % config.pivot_token_count);
        }
        q.text = text.str();
        q.language = lang;

        const std::vector<int> grades = candidate_grades(k, qn);
        std::set<std::size_t> used;
        for (int grade : grades) {
            std::size_t pidx;
            switch (grade) {
                case 3: pidx = source; break;
                case 2: pidx = partner; break;
                case 1: pidx = topic_mate; break;
                default: {
                    // disjoint passage from a different topic, no repeats
                    do {
                        const std::size_t ot =
                            (t + 1 + uniform_below(rng, num_topics - 1)) % num_topics;
                        const TopicLayout& other = corpus.topics[ot];
                        pidx = other.first_passage + uniform_below(rng, other.size);
                    } while (used.count(pidx) != 0);
                    break;
                }
            }
            used.insert(pidx);
            GradedInstance gi;
            gi.query_id = q.id;
            gi.passage_id = corpus.passages[pidx].id;
            gi.score = RelevanceScore(grade);
            gi.language = lang;
            gi.annotator_id = kTruthAnnotator;
            out.true_instances.push_back(std::move(gi));
        }
        out.queries.push_back(std::move(q));
    }
}

}  // namespace

void SynthConfig::validate() const {
    if (languages.empty()) throw std::invalid_argument("config needs at least one language");
    std::set<std::string> codes;
    for (const auto& lang : languages) {
        LanguageTag::make(lang.code, lang.tier);  // re-check the tag invariants
        if (!codes.insert(lang.code).second) {
            throw std::invalid_argument("duplicate language code: " + lang.code);
        }
    }
    if (candidates_per_query < 2) {
        throw std::invalid_argument("candidates_per_query must be >= 2");
    }
    if (passages_per_language < 2 * kTopicSize) {
        throw std::invalid_argument(
            "passages_per_language must be >= " + std::to_string(2 * kTopicSize) +
            " (need at least two topics so score-0 candidates exist)");
    }
    if (queries_per_language == 0) {
        throw std::invalid_argument("queries_per_language must be > 0");
    }
    if (candidates_per_query + 4 > passages_per_language) {
        throw std::invalid_argument(
            "candidates_per_query too large for passages_per_language: not enough "
            "disjoint passages for score-0 candidates");
    }
    // all four grades must be realizable per language
    if (candidates_per_query == 2 && queries_per_language < 3) {
        throw std::invalid_argument(
            "with k=2 the candidate grades rotate over queries; need >= 3 queries per "
            "language to realize all four grades");
    }
    if (candidates_per_query == 3 && queries_per_language < 2) {
        throw std::invalid_argument(
            "with k=3 the candidate grades alternate; need >= 2 queries per language");
    }
    const std::size_t num_topics = passages_per_language / kTopicSize;
    const std::size_t need =
        unique_tokens_needed(num_topics, passages_per_language) + kMinFillerPool;
    for (const auto& lang : languages) {
        auto it = vocab_size_by_tier.find(lang.tier);
        if (it == vocab_size_by_tier.end()) {
            throw std::invalid_argument("no vocab size configured for tier " +
                                        to_string(lang.tier));
        }
        if (it->second < need) {
            throw std::invalid_argument(
                "vocab too small to realize all four grades for language '" + lang.code +
                "': need " + std::to_string(need) + " tokens (topic/fact/private structure "
                "plus a filler pool), have " + std::to_string(it->second));
        }
    }
    noise_profile.validate();
}

std::map<std::pair<std::string, std::string>, int> SynthOutput::oracle_scores() const {
    std::map<std::pair<std::string, std::string>, int> m;
    for (const auto& gi : true_instances) {
        m[{gi.query_id, gi.passage_id}] = gi.score.value();
    }
    return m;
}

SynthOutput generate(const SynthConfig& config) {
    config.validate();
    SynthOutput out;
    for (const auto& lang : sorted_languages(config)) {
        LanguageCorpus corpus = build_corpus(config, lang);
        Rng rng(derive_seed(config.seed, "queries|train|" + lang.code));
        make_queries(config, lang, corpus, config.queries_per_language, rng, "q", out);
        for (auto& p : corpus.passages) out.passages.push_back(std::move(p));
    }
    return out;
}

SynthOutput generate_queries(const SynthConfig& config, std::size_t per_language,
                             const std::string& salt, const std::string& id_prefix) {
    config.validate();
    SynthOutput out;
    for (const auto& lang : sorted_languages(config)) {
        LanguageCorpus corpus = build_corpus(config, lang);
        Rng rng(derive_seed(config.seed, "queries|" + salt + "|" + lang.code));
        make_queries(config, lang, corpus, per_language, rng, id_prefix, out);
    }
    return out;
}

std::vector<GradedInstance> annotate_synthetic(const std::vector<GradedInstance>& true_instances,
                                               const NoiseProfile& profile,
                                               const std::string& annotator_id,
                                               std::uint64_t seed) {
    profile.validate();
    Rng rng(derive_seed(seed, "annotate|" + annotator_id));
    std::vector<GradedInstance> out;
    out.reserve(true_instances.size());
    for (const auto& gi : true_instances) {
        const ConfusionMatrix& m = profile.for_tier(gi.language.tier);
        const auto& row = m.rows[gi.score.value()];
        int observed;
        if (m.is_identity()) {
            observed = gi.score.value();
        } else {
            observed = sample_discrete(std::vector<double>(row.begin(), row.end()), rng);
        }
        GradedInstance o = gi;
        o.score = RelevanceScore(observed);
        o.annotator_id = annotator_id;
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace gradrel
