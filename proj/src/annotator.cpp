#include "gradrel/annotator.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace gradrel {

namespace {

const char* kQueryGenerationTemplate =
    "Your task is to write a <LANG> query that seeks information existing in a given "
    "context passage.\n"
    "The query should be relevant to the passage but does not need to cover the entire "
    "scope of the passage.\n"
    "The query should be in <LANG>, short, simple and in the style of web search query "
    "such as question-based or keyword-based.\n"
    "\n"
    "The passage is:\n"
    "<PASSAGE>";

const char* kRelevanceScoringTemplate =
    "You are a search quality rater evaluating the relevance of passages. Given a query "
    "and a passage, you must provide a score on an integer scale of 0 to 3 within "
    "brackets [] with the following meanings:\n"
    "[3] = Highly relevant: The passage is dedicated to the query and contains the exact "
    "answer.\n"
    "[2] = Relevant: The passage provides a partial answer to the query, but it lacks the "
    "exact information needed, so it cannot be considered highly relevant.\n"
    "[1] = Related: The passage seems related to the query but does not answer it.\n"
    "[0] = Irrelevant: The passage has nothing to do with the query.\n"
    "\n"
    "Query:\n"
    "<QUERY>\n"
    "\n"
    "Passage:\n"
    "<PASSAGE>";

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

std::set<std::string> tokenize(const std::string& text) {
    std::set<std::string> tokens;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) tokens.insert(tok);
    return tokens;
}

// Extracts the section between `header` and the next blank line (or end).
std::string section_after(const std::string& prompt, const std::string& header) {
    const std::size_t pos = prompt.find(header);
    if (pos == std::string::npos) return "";
    const std::size_t start = pos + header.size();
    const std::size_t end = prompt.find("\n\n", start);
    return prompt.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

PromptTemplate PromptTemplate::standard(PromptKind kind) {
    PromptTemplate t;
    t.name = kind;
    t.text = kind == PromptKind::query_generation ? kQueryGenerationTemplate
                                                  : kRelevanceScoringTemplate;
    return t;
}

std::string PromptTemplate::render(const std::string& lang, const std::string& passage,
                                   const std::string& query) const {
    std::string out = text;
    replace_all(out, "<LANG>", lang);
    replace_all(out, "<PASSAGE>", passage);
    replace_all(out, "<QUERY>", query);
    return out;
}

StubBackend::StubBackend() {
    // Token-overlap heuristic over the rendered scoring prompt: the fraction
    // of query tokens present in the passage maps onto the four grades.
    scorer_ = [](const std::string& prompt) -> std::string {
        const auto query = tokenize(section_after(prompt, "Query:\n"));
        const auto passage = tokenize(section_after(prompt, "Passage:\n"));
        if (query.empty()) return "[0]";
        std::size_t hit = 0;
        for (const auto& tok : query) hit += passage.count(tok);
        const double r = static_cast<double>(hit) / static_cast<double>(query.size());
        int score = 0;
        if (r > 0.95) {
            score = 3;
        } else if (r >= 0.6) {
            score = 2;
        } else if (r >= 0.35) {
            score = 1;
        }
        return "[" + std::to_string(score) + "]";
    };
}

HttpBackend::HttpBackend(std::string url, std::string auth_token)
    : url_(std::move(url)), auth_token_(std::move(auth_token)) {
    if (url_.empty()) throw std::invalid_argument("annotator: empty endpoint URL");
}

std::unique_ptr<HttpBackend> HttpBackend::from_environment() {
    const char* url = std::getenv("GRADREL_ANNOTATOR_URL");
    if (!url) {
        throw std::runtime_error("annotator: GRADREL_ANNOTATOR_URL is not set");
    }
    const char* token = std::getenv("GRADREL_ANNOTATOR_TOKEN");
    return std::make_unique<HttpBackend>(url, token ? token : "");
}

std::string HttpBackend::complete(const std::string& prompt) {
    // split "http://host:port/path" into base and path
    std::size_t scheme = url_.find("://");
    if (scheme == std::string::npos) throw TransportError("malformed endpoint URL: " + url_);
    std::size_t path_pos = url_.find('/', scheme + 3);
    const std::string base = path_pos == std::string::npos ? url_ : url_.substr(0, path_pos);
    const std::string path = path_pos == std::string::npos ? "/" : url_.substr(path_pos);

    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Headers headers;
    if (!auth_token_.empty()) headers.emplace("Authorization", "Bearer " + auth_token_);

    nlohmann::json body;
    body["prompt"] = prompt;
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
        throw TransportError("connection failed to " + base);
    }
    if (res->status != 200) {
        throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
        auto j = nlohmann::json::parse(res->body);
        return j.at("reply").get<std::string>();
    } catch (const std::exception& e) {
        throw TransportError(std::string("malformed endpoint response: ") + e.what());
    }
}

void RateLimiter::acquire() {
    if (rate_ <= 0.0) return;
    std::chrono::steady_clock::time_point wake;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        if (next_slot_ < now) next_slot_ = now;
        wake = next_slot_;
        next_slot_ += std::chrono::microseconds(static_cast<long long>(1e6 / rate_));
    }
    std::this_thread::sleep_until(wake);
}

std::optional<int> parse_bracketed_score(const std::string& reply, bool strict) {
    std::size_t i = 0;
    if (strict) {
        while (i < reply.size() && std::isspace(static_cast<unsigned char>(reply[i]))) ++i;
        if (i >= reply.size() || reply[i] != '[') return std::nullopt;
    }
    for (; i < reply.size(); ++i) {
        if (reply[i] != '[') continue;
        std::size_t j = i + 1;
        bool negative = false;
        if (j < reply.size() && reply[j] == '-') {
            negative = true;
            ++j;
        }
        std::size_t digits_start = j;
        long value = 0;
        while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) {
            value = value * 10 + (reply[j] - '0');
            ++j;
        }
        if (j > digits_start && j < reply.size() && reply[j] == ']') {
            return static_cast<int>(negative ? -value : value);
        }
        if (strict) return std::nullopt;
    }
    return std::nullopt;
}

AnnotatorClient::AnnotatorClient(std::shared_ptr<Backend> backend, ClientConfig config)
    : backend_(std::move(backend)),
      config_(config),
      limiter_(config.requests_per_second) {
    if (!backend_) throw std::invalid_argument("annotator: null backend");
    if (config_.max_attempts < 1) throw std::invalid_argument("annotator: max_attempts < 1");
}

std::string AnnotatorClient::call_with_retries(const std::string& prompt) {
    auto backoff = config_.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        limiter_.acquire();
        try {
            return backend_->complete(prompt);
        } catch (const TransportError& e) {
            last_error = e.what();
        }
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(static_cast<long long>(
                static_cast<double>(backoff.count()) * config_.backoff_multiplier));
        }
    }
    throw TransportError("transport exhausted after " + std::to_string(config_.max_attempts) +
                         " attempts: " + last_error);
}

ScoringResponse AnnotatorClient::score_pair(const ScoringRequest& request) {
    const auto tmpl = PromptTemplate::standard(PromptKind::relevance_scoring);
    const std::string prompt =
        tmpl.render(request.language, request.passage_text, request.query_text);
    const std::string reply = call_with_retries(prompt);
    const auto parsed = parse_bracketed_score(reply, config_.strict_parsing);
    if (!parsed) {
        throw PermanentParseError("no bracketed integer score in reply", reply);
    }
    if (*parsed < 0 || *parsed > 3) {
        throw PermanentParseError("bracketed score " + std::to_string(*parsed) +
                                      " outside the 0..3 scale",
                                  reply);
    }
    ScoringResponse response;
    response.score = RelevanceScore(*parsed);
    response.raw_reply = reply;
    return response;
}

AnnotatorClient::BatchResult AnnotatorClient::batch_score(
    const std::vector<ScoringRequest>& requests) {
    BatchResult result;
    result.responses.resize(requests.size());
    std::mutex failures_mutex;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < requests.size(); i = next.fetch_add(1)) {
            try {
                result.responses[i] = score_pair(requests[i]);
            } catch (const PermanentParseError& e) {
                std::lock_guard<std::mutex> lock(failures_mutex);
                result.failures.push_back({i, "parse", e.what(), e.raw_reply});
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failures_mutex);
                result.failures.push_back({i, "transport", e.what(), ""});
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(config_.concurrency, requests.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < n; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    std::sort(result.failures.begin(), result.failures.end(),
              [](const BatchFailure& a, const BatchFailure& b) { return a.index < b.index; });
    return result;
}

std::string AnnotatorClient::BatchResult::manifest_json() const {
    nlohmann::ordered_json j;
    j["total"] = responses.size();
    j["failed"] = failures.size();
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& f : failures) {
        nlohmann::ordered_json e;
        e["index"] = f.index;
        e["error_class"] = f.error_class;
        e["message"] = f.message;
        if (!f.raw_reply.empty()) e["raw_reply"] = f.raw_reply;
        arr.push_back(std::move(e));
    }
    j["failures"] = arr;
    return j.dump(2);
}

}  // namespace gradrel
