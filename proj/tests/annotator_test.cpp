#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <set>

#include "gradrel/annotator.hpp"

using namespace gradrel;

namespace {

std::shared_ptr<StubBackend> fixed_reply(const std::string& reply) {
    return std::make_shared<StubBackend>([reply](const std::string&) { return reply; });
}

ScoringRequest request() {
    ScoringRequest req;
    req.query_text = "what color is the sky";
    req.passage_text = "the sky is blue on clear days";
    req.language = "English";
    return req;
}

}  // namespace

TEST_CASE("scoring prompt template renders all placeholders") {
    auto tpl = PromptTemplate::standard(PromptKind::relevance_scoring);
    auto rendered = tpl.render("Finnish", "a passage body", "a query body");
    CHECK(rendered.find("<LANG>") == std::string::npos);
    CHECK(rendered.find("<PASSAGE>") == std::string::npos);
    CHECK(rendered.find("<QUERY>") == std::string::npos);
    CHECK(rendered.find("a passage body") != std::string::npos);
    CHECK(rendered.find("a query body") != std::string::npos);
    // rendering is pure
    CHECK(rendered == tpl.render("Finnish", "a passage body", "a query body"));
}

TEST_CASE("query generation template exists and renders") {
    auto tpl = PromptTemplate::standard(PromptKind::query_generation);
    auto rendered = tpl.render("Arabic", "desert climates are dry");
    CHECK(rendered.find("Arabic") != std::string::npos);
    CHECK(rendered.find("desert climates are dry") != std::string::npos);
}

TEST_CASE("bracketed score parsing") {
    CHECK(parse_bracketed_score("[2]", false) == 2);
    CHECK(parse_bracketed_score("the score is [3].", false) == 3);
    CHECK(parse_bracketed_score("[0] trailing", false) == 0);
    CHECK(parse_bracketed_score("no score here", false) == std::nullopt);
    CHECK(parse_bracketed_score("[]", false) == std::nullopt);
    CHECK(parse_bracketed_score("[abc]", false) == std::nullopt);
    // strict mode requires the reply to begin with the score
    CHECK(parse_bracketed_score("[1] rest", true) == 1);
    CHECK(parse_bracketed_score("well [1]", true) == std::nullopt);
}

TEST_CASE("score_pair returns the parsed score and raw reply") {
    AnnotatorClient client(fixed_reply("[2]"));
    auto res = client.score_pair(request());
    CHECK(res.score.value() == 2);
    CHECK(res.raw_reply == "[2]");
}

TEST_CASE("out-of-scale and unparseable replies are permanent errors") {
    AnnotatorClient bad_scale(fixed_reply("[7]"));
    CHECK_THROWS_AS(bad_scale.score_pair(request()), PermanentParseError);
    AnnotatorClient negative(fixed_reply("[-1]"));
    CHECK_THROWS_AS(negative.score_pair(request()), PermanentParseError);
    AnnotatorClient chatter(fixed_reply("I think it is quite relevant"));
    try {
        chatter.score_pair(request());
        FAIL("expected PermanentParseError");
    } catch (const PermanentParseError& e) {
        CHECK(e.raw_reply == "I think it is quite relevant");
    }
}

TEST_CASE("parse failures are not retried") {
    auto calls = std::make_shared<std::atomic<int>>(0);
    auto backend = std::make_shared<StubBackend>([calls](const std::string&) {
        ++*calls;
        return std::string("nonsense");
    });
    ClientConfig cfg;
    cfg.max_attempts = 5;
    AnnotatorClient client(backend, cfg);
    CHECK_THROWS_AS(client.score_pair(request()), PermanentParseError);
    CHECK(calls->load() == 1);
}

TEST_CASE("transport errors are retried with backoff until success") {
    auto calls = std::make_shared<std::atomic<int>>(0);
    auto backend = std::make_shared<StubBackend>([calls](const std::string&) -> std::string {
        if (++*calls < 3) throw TransportError("connection reset");
        return "[1]";
    });
    ClientConfig cfg;
    cfg.max_attempts = 4;
    cfg.initial_backoff = std::chrono::milliseconds(1);
    AnnotatorClient client(backend, cfg);
    auto res = client.score_pair(request());
    CHECK(res.score.value() == 1);
    CHECK(calls->load() == 3);
}

TEST_CASE("transport errors surface after max attempts") {
    auto calls = std::make_shared<std::atomic<int>>(0);
    auto backend = std::make_shared<StubBackend>([calls](const std::string&) -> std::string {
        ++*calls;
        throw TransportError("down");
    });
    ClientConfig cfg;
    cfg.max_attempts = 3;
    cfg.initial_backoff = std::chrono::milliseconds(1);
    AnnotatorClient client(backend, cfg);
    CHECK_THROWS_AS(client.score_pair(request()), TransportError);
    CHECK(calls->load() == 3);
}

TEST_CASE("default stub backend is deterministic and in scale") {
    AnnotatorClient client(std::make_shared<StubBackend>());
    auto a = client.score_pair(request());
    auto b = client.score_pair(request());
    CHECK(a.score.value() == b.score.value());
    CHECK(a.score.value() >= 0);
    CHECK(a.score.value() <= 3);

    // identical query and passage should look highly relevant
    ScoringRequest same;
    same.query_text = "glaciers move slowly downhill";
    same.passage_text = "glaciers move slowly downhill";
    same.language = "English";
    auto hi = client.score_pair(same);
    ScoringRequest off;
    off.query_text = "glaciers move slowly downhill";
    off.passage_text = "stock prices rallied in tokyo";
    off.language = "English";
    auto lo = client.score_pair(off);
    CHECK(hi.score.value() > lo.score.value());
}

TEST_CASE("batch keeps request order and isolates failures") {
    auto backend = std::make_shared<StubBackend>([](const std::string& prompt) -> std::string {
        if (prompt.find("FAILME") != std::string::npos) return "unparseable";
        if (prompt.find("DROPME") != std::string::npos) throw TransportError("gone");
        return "[2]";
    });
    ClientConfig cfg;
    cfg.max_attempts = 2;
    cfg.initial_backoff = std::chrono::milliseconds(1);
    cfg.concurrency = 3;
    AnnotatorClient client(backend, cfg);

    std::vector<ScoringRequest> reqs(5, request());
    reqs[1].passage_text = "FAILME";
    reqs[3].passage_text = "DROPME";
    auto batch = client.batch_score(reqs);
    REQUIRE(batch.responses.size() == 5);
    CHECK(batch.responses[0].has_value());
    CHECK_FALSE(batch.responses[1].has_value());
    CHECK(batch.responses[2].has_value());
    CHECK_FALSE(batch.responses[3].has_value());
    CHECK(batch.responses[4].has_value());
    REQUIRE(batch.failures.size() == 2);
    CHECK(batch.failures[0].index == 1);
    CHECK(batch.failures[0].error_class == "parse");
    CHECK(batch.failures[1].index == 3);
    CHECK(batch.failures[1].error_class == "transport");
    auto manifest = batch.manifest_json();
    CHECK(manifest.find("\"failures\"") != std::string::npos);
}

TEST_CASE("rate limiter spaces out calls") {
    RateLimiter limiter(200.0);  // 5 ms per slot
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 4; ++i) limiter.acquire();
    auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() >= 15);
}

TEST_CASE("strict parsing rejects chatter before the score") {
    ClientConfig cfg;
    cfg.strict_parsing = true;
    AnnotatorClient client(fixed_reply("I would say [2]"), cfg);
    CHECK_THROWS_AS(client.score_pair(request()), PermanentParseError);
}
