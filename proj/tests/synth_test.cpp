#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <sstream>

#include "gradrel/dataset_io.hpp"
#include "gradrel/synth.hpp"

using namespace gradrel;

namespace {

SynthConfig config_1lang(std::uint64_t seed = 7) {
    SynthConfig cfg;
    cfg.seed = seed;
    cfg.languages = {LanguageTag::make("aa", ResourceTier::high)};
    cfg.passages_per_language = 100;
    cfg.queries_per_language = 20;
    cfg.candidates_per_query = 5;
    return cfg;
}

std::string serialize(const SynthOutput& out) {
    std::ostringstream os;
    for (const auto& q : out.queries) os << encode_query(q) << "\n";
    for (const auto& p : out.passages) os << encode_passage(p) << "\n";
    for (const auto& gi : out.true_instances) os << encode_instance(gi) << "\n";
    return os.str();
}

}  // namespace

TEST_CASE("counts forced by construction: 20 queries x k=5 -> 100 instances") {
    auto out = generate(config_1lang());
    CHECK(out.passages.size() == 100);
    CHECK(out.queries.size() == 20);
    CHECK(out.true_instances.size() == 100);
    for (const auto& gi : out.true_instances) {
        CHECK(gi.score.value() >= 0);
        CHECK(gi.score.value() <= 3);
        CHECK(gi.annotator_id == std::string(kTruthAnnotator));
    }
}

TEST_CASE("same config twice is byte-identical") {
    CHECK(serialize(generate(config_1lang())) == serialize(generate(config_1lang())));
    CHECK(serialize(generate(config_1lang(1))) != serialize(generate(config_1lang(2))));
}

TEST_CASE("every query has exactly k candidates and exactly one score 3") {
    auto out = generate(config_1lang());
    std::map<std::string, int> count, threes;
    for (const auto& gi : out.true_instances) {
        count[gi.query_id] += 1;
        if (gi.score.value() == 3) threes[gi.query_id] += 1;
    }
    REQUIRE(count.size() == out.queries.size());
    for (const auto& [qid, n] : count) {
        CHECK(n == 5);
        CHECK(threes[qid] == 1);
    }
}

TEST_CASE("all four grades realizable per language") {
    SynthConfig cfg = config_1lang();
    cfg.languages.push_back(LanguageTag::make("bb", ResourceTier::low));
    auto out = generate(cfg);
    std::map<std::string, std::set<int>> grades;
    for (const auto& gi : out.true_instances) grades[gi.language.code].insert(gi.score.value());
    for (const auto& [code, seen] : grades) {
        INFO("language ", code);
        CHECK(seen == std::set<int>{0, 1, 2, 3});
    }
}

TEST_CASE("grades stay realizable at small k via rotation") {
    SynthConfig cfg = config_1lang();
    cfg.candidates_per_query = 2;
    cfg.queries_per_language = 12;
    auto out = generate(cfg);
    std::set<int> seen;
    for (const auto& gi : out.true_instances) seen.insert(gi.score.value());
    CHECK(seen == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("vocab too small is rejected with an explanation") {
    SynthConfig cfg = config_1lang();
    cfg.vocab_size_by_tier[ResourceTier::high] = 10;
    CHECK_THROWS_WITH_AS(generate(cfg),
                         doctest::Contains("vocab too small"), std::invalid_argument);
}

TEST_CASE("config invariant violations are rejected") {
    auto bad = config_1lang();
    bad.candidates_per_query = 1;
    CHECK_THROWS(generate(bad));
    bad = config_1lang();
    bad.passages_per_language = 4;
    CHECK_THROWS(generate(bad));
    bad = config_1lang();
    bad.candidates_per_query = 2;
    bad.queries_per_language = 2;
    CHECK_THROWS(generate(bad));
}

TEST_CASE("identity noise profile reproduces true scores") {
    auto out = generate(config_1lang());
    auto annotated = annotate_synthetic(out.true_instances, NoiseProfile::clean(), "llm-a", 3);
    REQUIRE(annotated.size() == out.true_instances.size());
    for (std::size_t i = 0; i < annotated.size(); ++i) {
        CHECK(annotated[i].score.value() == out.true_instances[i].score.value());
        CHECK(annotated[i].annotator_id == "llm-a");
    }
}

TEST_CASE("degenerate confusion row maps every true 3 to 2") {
    auto out = generate(config_1lang());
    NoiseProfile profile;
    auto m = ConfusionMatrix::identity();
    m.rows[3] = {0.0, 0.0, 1.0, 0.0};
    profile.by_tier[ResourceTier::high] = m;
    auto annotated = annotate_synthetic(out.true_instances, profile, "llm-a", 3);
    for (std::size_t i = 0; i < annotated.size(); ++i) {
        if (out.true_instances[i].score.value() == 3) {
            CHECK(annotated[i].score.value() == 2);
        } else {
            CHECK(annotated[i].score.value() == out.true_instances[i].score.value());
        }
    }
}

TEST_CASE("half-half confusion row lands near 0.5 over many draws") {
    // build 10,000 true-3 instances directly
    std::vector<GradedInstance> truth;
    auto lang = LanguageTag::make("aa", ResourceTier::high);
    for (int i = 0; i < 10000; ++i) {
        GradedInstance gi;
        gi.query_id = "q" + std::to_string(i);
        gi.passage_id = "p" + std::to_string(i);
        gi.score = RelevanceScore(3);
        gi.language = lang;
        gi.annotator_id = kTruthAnnotator;
        truth.push_back(gi);
    }
    NoiseProfile profile;
    auto m = ConfusionMatrix::identity();
    m.rows[3] = {0.0, 0.0, 0.5, 0.5};
    profile.by_tier[ResourceTier::high] = m;
    auto annotated = annotate_synthetic(truth, profile, "llm-a", 12345);
    std::size_t twos = 0;
    for (const auto& gi : annotated) {
        if (gi.score.value() == 2) ++twos;
    }
    const double frac = static_cast<double>(twos) / 10000.0;
    CHECK(frac > 0.48);
    CHECK(frac < 0.52);
}

TEST_CASE("row-stochastic validation") {
    ConfusionMatrix m = ConfusionMatrix::identity();
    m.rows[1] = {0.5, 0.4, 0.0, 0.0};  // sums to 0.9
    NoiseProfile p;
    p.by_tier[ResourceTier::low] = m;
    CHECK_THROWS(p.validate());
    m.rows[1] = {0.5, 0.5, 0.0, 0.0};
    p.by_tier[ResourceTier::low] = m;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("eval queries differ from train queries but share the corpus") {
    auto cfg = config_1lang();
    auto train = generate(cfg);
    auto eval = generate_queries(cfg, 10, "eval", "eq");
    CHECK(eval.queries.size() == 10);
    CHECK(eval.passages.empty());
    std::set<std::string> train_ids, corpus_ids;
    for (const auto& q : train.queries) train_ids.insert(q.id);
    for (const auto& p : train.passages) corpus_ids.insert(p.id);
    for (const auto& q : eval.queries) CHECK(train_ids.count(q.id) == 0);
    for (const auto& gi : eval.true_instances) CHECK(corpus_ids.count(gi.passage_id) == 1);
}
