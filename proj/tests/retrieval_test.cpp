#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gradrel/retrieval.hpp"
#include "gradrel/rng.hpp"

using namespace gradrel;

namespace {

std::vector<double> unit(std::vector<double> v) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
}

PassageIndex random_index(Rng& rng, std::size_t n, std::size_t dim) {
    PassageIndex index;
    index.dim = dim;
    for (std::size_t i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "p%04zu", i);
        index.ids.push_back(buf);
        std::vector<double> row(dim);
        for (double& x : row) x = uniform_unit(rng) * 2.0 - 1.0;
        row = unit(row);
        index.embeddings.insert(index.embeddings.end(), row.begin(), row.end());
    }
    return index;
}

std::vector<double> random_query(Rng& rng, std::size_t dim) {
    std::vector<double> q(dim);
    for (double& x : q) x = uniform_unit(rng) * 2.0 - 1.0;
    return unit(q);
}

// Full-sort oracle with the same tie rule.
std::vector<ScoredPassage> oracle_search(const PassageIndex& index,
                                         const std::vector<double>& query, std::size_t k) {
    std::vector<ScoredPassage> all;
    for (std::size_t i = 0; i < index.size(); ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < index.dim; ++d) {
            s += index.embeddings[i * index.dim + d] * query[d];
        }
        all.push_back({index.ids[i], s});
    }
    std::sort(all.begin(), all.end(), [](const ScoredPassage& a, const ScoredPassage& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.passage_id < b.passage_id;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

// From-scratch nDCG with explicit loops, exponential gains.
double ndcg_oracle(const std::vector<int>& ranked_grades, const std::vector<int>& judged) {
    auto dcg = [](const std::vector<int>& grades) {
        double total = 0.0;
        for (std::size_t i = 0; i < grades.size(); ++i) {
            total += (std::pow(2.0, grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
        }
        return total;
    };
    std::vector<int> ideal = judged;
    std::sort(ideal.rbegin(), ideal.rend());
    if (ideal.size() > ranked_grades.size()) ideal.resize(ranked_grades.size());
    const double idcg = dcg(ideal);
    if (idcg == 0.0) return 0.0;
    return dcg(ranked_grades) / idcg;
}

}  // namespace

TEST_CASE("hand-worked inverted ranking example") {
    Qrels qrels;
    qrels.judgments[{"q1", "p1"}] = 3;
    qrels.judgments[{"q1", "p2"}] = 1;
    RunResult run;
    run.ranked["q1"] = {{"p2", 0.9}, {"p1", 0.8}};
    auto res = ndcg_at_k(run, qrels, 10);
    CHECK(res.per_query.at("q1") == doctest::Approx(0.70981).epsilon(1e-4));
}

TEST_CASE("perfect ranking scores exactly 1") {
    Qrels qrels;
    qrels.judgments[{"q1", "p1"}] = 3;
    qrels.judgments[{"q1", "p2"}] = 2;
    qrels.judgments[{"q1", "p3"}] = 0;
    RunResult run;
    run.ranked["q1"] = {{"p1", 0.9}, {"p2", 0.8}, {"p3", 0.7}};
    auto res = ndcg_at_k(run, qrels, 10);
    CHECK(res.per_query.at("q1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ndcg matches a from-scratch oracle on random rankings") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + uniform_below(rng, 20);
        Qrels qrels;
        std::vector<int> judged;
        RunResult run;
        std::vector<std::string> pids;
        for (std::size_t i = 0; i < n; ++i) {
            std::string pid = "p" + std::to_string(i);
            pids.push_back(pid);
            int grade = static_cast<int>(uniform_below(rng, 4));
            qrels.judgments[{"q", pid}] = grade;
            judged.push_back(grade);
        }
        shuffle_in_place(pids, rng);
        const std::size_t k = 1 + uniform_below(rng, n);
        std::vector<int> ranked_grades;
        double sim = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            run.ranked["q"].push_back({pids[i], sim});
            sim -= 0.01;
            ranked_grades.push_back(qrels.judgments[{"q", pids[i]}]);
        }
        auto res = ndcg_at_k(run, qrels, k);
        const double expected = ndcg_oracle(ranked_grades, judged);
        CHECK(res.per_query.at("q") == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("linear gains differ from exponential on high grades") {
    Qrels qrels;
    qrels.judgments[{"q", "p1"}] = 3;
    qrels.judgments[{"q", "p2"}] = 2;
    RunResult run;
    run.ranked["q"] = {{"p2", 0.9}, {"p1", 0.8}};
    auto expo = ndcg_at_k(run, qrels, 10, GainFunction::exponential);
    auto lin = ndcg_at_k(run, qrels, 10, GainFunction::linear);
    CHECK(expo.per_query.at("q") != lin.per_query.at("q"));
}

TEST_CASE("zero-idcg queries score 0 and are counted") {
    Qrels qrels;
    qrels.judgments[{"q1", "p1"}] = 0;
    qrels.judgments[{"q2", "p1"}] = 2;
    RunResult run;
    run.ranked["q1"] = {{"p1", 0.9}};
    run.ranked["q2"] = {{"p1", 0.9}};
    auto res = ndcg_at_k(run, qrels, 10);
    CHECK(res.per_query.at("q1") == 0.0);
    CHECK(res.zero_idcg_queries == 1);
    CHECK(res.macro_average == doctest::Approx(0.5));
}

TEST_CASE("unjudged retrieved passages count as grade 0") {
    Qrels qrels;
    qrels.judgments[{"q", "p1"}] = 3;
    RunResult run;
    run.ranked["q"] = {{"stranger", 0.95}, {"p1", 0.9}};
    auto res = ndcg_at_k(run, qrels, 10);
    CHECK(res.per_query.at("q") == doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-10));
}

TEST_CASE("search matches the full-sort oracle on random data") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 5 + uniform_below(rng, 80);
        const std::size_t dim = 2 + uniform_below(rng, 14);
        auto index = random_index(rng, n, dim);
        auto query = random_query(rng, dim);
        const std::size_t k = 1 + uniform_below(rng, n + 5);
        auto got = search(index, query, k);
        auto expected = oracle_search(index, query, k);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].passage_id == expected[i].passage_id);
            CHECK(got[i].similarity == doctest::Approx(expected[i].similarity).epsilon(1e-12));
        }
    }
}

TEST_CASE("ties break by ascending passage id") {
    Rng rng(3);
    auto index = random_index(rng, 4, 8);
    // duplicate row 0's embedding into rows 1 and 2
    for (std::size_t d = 0; d < 8; ++d) {
        index.embeddings[1 * 8 + d] = index.embeddings[d];
        index.embeddings[2 * 8 + d] = index.embeddings[d];
    }
    auto query = random_query(rng, 8);
    auto got = search(index, query, 4);
    std::vector<std::size_t> tied_positions;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (got[i].passage_id == "p0000" || got[i].passage_id == "p0001" ||
            got[i].passage_id == "p0002") {
            tied_positions.push_back(i);
        }
    }
    REQUIRE(tied_positions.size() == 3);
    CHECK(got[tied_positions[0]].passage_id == "p0000");
    CHECK(got[tied_positions[1]].passage_id == "p0001");
    CHECK(got[tied_positions[2]].passage_id == "p0002");
}

TEST_CASE("search input validation") {
    PassageIndex empty;
    empty.dim = 4;
    CHECK_THROWS(search(empty, {1.0, 0.0, 0.0, 0.0}, 5));
    Rng rng(1);
    auto index = random_index(rng, 5, 4);
    CHECK_THROWS(search(index, {1.0, 0.0}, 5));       // dim mismatch
    CHECK_THROWS(search(index, random_query(rng, 4), 0));  // cutoff < 1
}

TEST_CASE("index validation rejects non-unit rows and duplicate ids") {
    Rng rng(2);
    auto index = random_index(rng, 5, 4);
    CHECK_NOTHROW(index.validate());
    auto bad = index;
    bad.embeddings[0] *= 2.0;
    CHECK_THROWS(bad.validate());
    auto dup = index;
    dup.ids[1] = dup.ids[0];
    CHECK_THROWS(dup.validate());
}

TEST_CASE("recall@k counts relevant retrieved over relevant judged") {
    Qrels qrels;
    qrels.judgments[{"q", "p1"}] = 3;
    qrels.judgments[{"q", "p2"}] = 2;
    qrels.judgments[{"q", "p3"}] = 1;
    RunResult run;
    run.ranked["q"] = {{"p1", 0.9}, {"p3", 0.8}};
    auto res = recall_at_k(run, qrels, Threshold(2), 2);
    CHECK(res.per_query.at("q") == doctest::Approx(0.5));
    // vacuous when nothing clears the threshold
    auto vac = recall_at_k(run, qrels, Threshold(2), 2);
    Qrels none;
    none.judgments[{"q", "p1"}] = 1;
    auto res2 = recall_at_k(run, none, Threshold(2), 2);
    CHECK(res2.per_query.at("q") == 1.0);
    CHECK(res2.vacuous_queries == 1);
    (void)vac;
}

TEST_CASE("run and qrels files round-trip") {
    auto dir = std::filesystem::temp_directory_path() /
               ("gradrel_retrieval_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    RunResult run;
    run.ranked["q1"] = {{"p1", 0.912345}, {"p2", 0.5}};
    run.ranked["q2"] = {{"p9", -0.25}};
    write_run(run, (dir / "run.tsv").string());
    auto back = read_run((dir / "run.tsv").string());
    REQUIRE(back.ranked.size() == 2);
    CHECK(back.ranked.at("q1")[0].passage_id == "p1");
    CHECK(back.ranked.at("q1")[0].similarity == doctest::Approx(0.912345).epsilon(1e-9));
    CHECK(back.ranked.at("q2")[0].similarity == doctest::Approx(-0.25).epsilon(1e-9));

    Qrels qrels;
    qrels.judgments[{"q1", "p1"}] = 3;
    qrels.judgments[{"q2", "p9"}] = 0;
    write_qrels(qrels, (dir / "qrels.tsv").string());
    auto q = read_qrels((dir / "qrels.tsv").string());
    CHECK(q.judgments == qrels.judgments);

    // bad rank sequence is rejected
    {
        std::ofstream out(dir / "bad_run.tsv");
        out << "q1\tp1\t1\t0.500000\n";
        out << "q1\tp2\t3\t0.400000\n";
    }
    CHECK_THROWS(read_run((dir / "bad_run.tsv").string()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("qrels_from_instances keeps grades and grade() defaults to 0") {
    GradedInstance gi;
    gi.query_id = "q1";
    gi.passage_id = "p1";
    gi.score = RelevanceScore(2);
    gi.language = LanguageTag::make("en");
    gi.annotator_id = "a";
    auto qrels = qrels_from_instances({gi});
    CHECK(qrels.grade("q1", "p1") == 2);
    CHECK(qrels.grade("q1", "nope") == 0);
    CHECK(qrels.judged_grades("q1") == std::vector<int>{2});
    CHECK(qrels.judged_grades("zzz").empty());
}
