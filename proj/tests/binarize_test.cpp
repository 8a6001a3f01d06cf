#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "gradrel/binarize.hpp"
#include "gradrel/rng.hpp"

using namespace gradrel;

namespace {

std::vector<GradedInstance> four_scores() {
    auto en = LanguageTag::make("en");
    std::vector<GradedInstance> out;
    for (int s = 0; s <= 3; ++s) {
        GradedInstance gi;
        gi.query_id = "q1";
        gi.passage_id = "p" + std::to_string(s);
        gi.score = RelevanceScore(s);
        gi.language = en;
        gi.annotator_id = "a";
        out.push_back(gi);
    }
    return out;
}

std::vector<GradedInstance> random_dataset(Rng& rng, std::size_t n) {
    auto en = LanguageTag::make("en");
    auto fi = LanguageTag::make("fi", ResourceTier::low);
    std::vector<GradedInstance> out;
    for (std::size_t i = 0; i < n; ++i) {
        GradedInstance gi;
        gi.query_id = "q" + std::to_string(uniform_below(rng, n / 4 + 1));
        gi.passage_id = "p" + std::to_string(i);
        gi.score = RelevanceScore(static_cast<int>(uniform_below(rng, 4)));
        gi.language = uniform_below(rng, 2) == 0 ? en : fi;
        gi.annotator_id = "a";
        out.push_back(gi);
    }
    return out;
}

std::set<std::pair<std::string, std::string>> as_set(
    const std::vector<std::pair<std::string, std::string>>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("scores [0,1,2,3] at tau=1 -> 3 positives, 1 negative") {
    auto set = binarize(four_scores(), Threshold(1), "a");
    CHECK(set.positives.size() == 3);
    CHECK(set.negatives.size() == 1);
}

TEST_CASE("scores [0,1,2,3] at tau=3 -> 1 positive, 3 negatives") {
    auto set = binarize(four_scores(), Threshold(3), "a");
    CHECK(set.positives.size() == 1);
    CHECK(set.negatives.size() == 3);
    CHECK(set.positives[0].second == "p3");
}

TEST_CASE("positives and negatives partition the input") {
    Rng rng(5);
    auto data = random_dataset(rng, 50);
    auto set = binarize(data, Threshold(2), "a");
    CHECK(set.positives.size() + set.negatives.size() == data.size());
    auto pos = as_set(set.positives);
    for (const auto& pair : set.negatives) CHECK(pos.count(pair) == 0);
}

TEST_CASE("monotonicity: positives(3) subset positives(2) subset positives(1)") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto data = random_dataset(rng, 10 + uniform_below(rng, 90));
        auto p1 = as_set(binarize(data, Threshold(1), "a").positives);
        auto p2 = as_set(binarize(data, Threshold(2), "a").positives);
        auto p3 = as_set(binarize(data, Threshold(3), "a").positives);
        for (const auto& pair : p3) CHECK(p2.count(pair) == 1);
        for (const auto& pair : p2) CHECK(p1.count(pair) == 1);
        // |P| + |N| constant across tau
        for (int tau = 1; tau <= 3; ++tau) {
            auto set = binarize(data, Threshold(tau), "a");
            CHECK(set.positives.size() + set.negatives.size() == data.size());
        }
    }
}

TEST_CASE("binarize commutes with language filtering") {
    Rng rng(17);
    auto data = random_dataset(rng, 80);
    std::vector<GradedInstance> only_fi;
    for (const auto& gi : data) {
        if (gi.language.code == "fi") only_fi.push_back(gi);
    }
    auto filtered_then = binarize(only_fi, Threshold(2), "a");
    auto then_filtered = binarize(data, Threshold(2), "a");
    std::set<std::pair<std::string, std::string>> fi_pairs;
    for (const auto& gi : only_fi) fi_pairs.insert({gi.query_id, gi.passage_id});
    std::vector<std::pair<std::string, std::string>> pos_of_fi;
    for (const auto& pair : then_filtered.positives) {
        if (fi_pairs.count(pair) != 0) pos_of_fi.push_back(pair);
    }
    CHECK(as_set(pos_of_fi) == as_set(filtered_then.positives));
}

TEST_CASE("queries without positives are listed, balance is per language") {
    auto data = four_scores();
    // add a query whose best score is 1
    GradedInstance gi;
    gi.query_id = "q2";
    gi.passage_id = "px";
    gi.score = RelevanceScore(1);
    gi.language = LanguageTag::make("fi", ResourceTier::low);
    gi.annotator_id = "a";
    data.push_back(gi);
    auto set = binarize(data, Threshold(2), "a");
    REQUIRE(set.queries_without_positives.size() == 1);
    CHECK(set.queries_without_positives[0] == "q2");
    CHECK(set.balance_by_language.at("fi").negatives == 1);
    CHECK(set.balance_by_language.at("en").positives == 2);
    auto json = set.balance_json();
    CHECK(json.find("queries_without_positives") != std::string::npos);
}

TEST_CASE("empty input yields empty set with warning flag") {
    auto set = binarize({}, Threshold(2), "a");
    CHECK(set.empty_input);
    CHECK(set.positives.empty());
    CHECK(set.negatives.empty());
}

TEST_CASE("wrong annotator id is rejected") {
    CHECK_THROWS_AS(binarize(four_scores(), Threshold(2), "someone-else"),
                    std::invalid_argument);
}
