#pragma once
// Bridge to an LLM scoring endpoint: prompt templates, reply parsing, retry
// with exponential backoff, rate limiting, and bounded-concurrency batches.
// A deterministic local stub is the default backend.

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gradrel/core.hpp"

namespace gradrel {

enum class PromptKind { query_generation, relevance_scoring };

struct PromptTemplate {
    PromptKind name;
    std::string text;  // with <LANG>/<PASSAGE>/<QUERY> placeholders

    static PromptTemplate standard(PromptKind kind);
    // Replaces every placeholder occurrence; pure, byte-deterministic.
    std::string render(const std::string& lang, const std::string& passage,
                       const std::string& query = "") const;
};

struct ScoringRequest {
    std::string query_text;
    std::string passage_text;
    std::string language;
};

struct ScoringResponse {
    RelevanceScore score{0};
    std::string raw_reply;
};

struct PermanentParseError : std::runtime_error {
    explicit PermanentParseError(const std::string& msg, std::string reply)
        : std::runtime_error(msg), raw_reply(std::move(reply)) {}
    std::string raw_reply;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimal wire contract: a backend turns a prompt into a reply string.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic local stand-in: replies with the bracketed score produced by
// the supplied function (token-overlap heuristic by default).
class StubBackend : public Backend {
  public:
    using Scorer = std::function<std::string(const std::string& prompt)>;
    StubBackend();  // heuristic scorer
    explicit StubBackend(Scorer scorer) : scorer_(std::move(scorer)) {}
    std::string complete(const std::string& prompt) override { return scorer_(prompt); }

  private:
    Scorer scorer_;
};

// JSON POST {"prompt": ...} -> {"reply": ...}. Endpoint and auth token come
// from the constructor or the GRADREL_ANNOTATOR_URL / GRADREL_ANNOTATOR_TOKEN
// environment variables.
class HttpBackend : public Backend {
  public:
    explicit HttpBackend(std::string url, std::string auth_token = "");
    static std::unique_ptr<HttpBackend> from_environment();
    std::string complete(const std::string& prompt) override;

  private:
    std::string url_;
    std::string auth_token_;
};

// Thread-safe token bucket; rate <= 0 disables limiting.
class RateLimiter {
  public:
    explicit RateLimiter(double requests_per_second) : rate_(requests_per_second) {}
    void acquire();

  private:
    double rate_;
    std::mutex mutex_;
    std::chrono::steady_clock::time_point next_slot_{};
};

struct ClientConfig {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{100};
    double backoff_multiplier = 2.0;
    double requests_per_second = 0.0;  // 0 = unlimited
    bool strict_parsing = false;       // reply must begin with the bracketed score
    std::size_t concurrency = 4;
    // opaque decoding options recorded in manifests, passed through untouched
    std::string backend_options_json = "{}";
};

// First bracketed integer in the reply; out-of-scale or missing -> nullopt.
std::optional<int> parse_bracketed_score(const std::string& reply, bool strict);

class AnnotatorClient {
  public:
    AnnotatorClient(std::shared_ptr<Backend> backend, ClientConfig config = {});

    // Renders the scoring prompt, calls the backend with retries and rate
    // limiting, parses the reply. Throws PermanentParseError or TransportError.
    ScoringResponse score_pair(const ScoringRequest& request);

    struct BatchFailure {
        std::size_t index;
        std::string error_class;  // "parse" or "transport"
        std::string message;
        std::string raw_reply;
    };
    struct BatchResult {
        std::vector<std::optional<ScoringResponse>> responses;  // request order
        std::vector<BatchFailure> failures;
        std::string manifest_json() const;
    };

    // Bounded concurrency; failures isolated per request.
    BatchResult batch_score(const std::vector<ScoringRequest>& requests);

  private:
    std::string call_with_retries(const std::string& prompt);
    std::shared_ptr<Backend> backend_;
    ClientConfig config_;
    RateLimiter limiter_;
};

}  // namespace gradrel
