#include "gradrel/dataset_io.hpp"

#include <zlib.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace gradrel {

ResourceTier default_tier(const std::string& code) {
    if (code == "fi" || code == "ar") return ResourceTier::low;
    if (code == "ja") return ResourceTier::medium;
    if (code == "ru" || code == "es") return ResourceTier::high;
    if (code == "en") return ResourceTier::very_high;
    return ResourceTier::medium;
}

namespace {

using ordered_json = nlohmann::ordered_json;

bool ends_with_gz(const std::string& path) {
    return path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
}

std::string json_escape(const std::string& s) {
    return ordered_json(s).dump();
}

std::string require_string(const ordered_json& j, const char* field, const std::string& path,
                           std::size_t line) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string()) {
        throw ParseError(path, line, std::string("missing or non-string field '") + field + "'");
    }
    return it->get<std::string>();
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void parse_line(const std::string& line, std::size_t line_no, const std::string& path,
                Dataset& out) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw ParseError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(path, line_no, "record is not a JSON object");
    const std::string t = require_string(j, "t", path, line_no);
    if (t == "q") {
        Query q;
        q.id = require_string(j, "id", path, line_no);
        q.text = require_string(j, "text", path, line_no);
        if (trimmed(q.text).empty()) throw ParseError(path, line_no, "empty query text");
        q.language = LanguageTag::make(require_string(j, "lang", path, line_no),
                                       default_tier(j["lang"].get<std::string>()));
        out.queries.push_back(std::move(q));
    } else if (t == "p") {
        Passage p;
        p.id = require_string(j, "id", path, line_no);
        p.text = require_string(j, "text", path, line_no);
        if (trimmed(p.text).empty()) throw ParseError(path, line_no, "empty passage text");
        p.language = LanguageTag::make(require_string(j, "lang", path, line_no),
                                       default_tier(j["lang"].get<std::string>()));
        out.passages.push_back(std::move(p));
    } else if (t == "i") {
        GradedInstance gi;
        gi.query_id = require_string(j, "qid", path, line_no);
        gi.passage_id = require_string(j, "pid", path, line_no);
        auto sit = j.find("score");
        if (sit == j.end() || !sit->is_number_integer()) {
            throw ParseError(path, line_no, "missing or non-integer field 'score'");
        }
        try {
            gi.score = RelevanceScore(sit->get<int>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, line_no, std::string("field 'score': ") + e.what());
        }
        gi.language = LanguageTag::make(require_string(j, "lang", path, line_no),
                                        default_tier(j["lang"].get<std::string>()));
        gi.annotator_id = require_string(j, "annotator", path, line_no);
        out.instances.push_back(std::move(gi));
    } else {
        throw ParseError(path, line_no, "unknown record type tag '" + t + "'");
    }
}

void for_each_line(const std::string& path, const std::function<void(const std::string&, std::size_t)>& fn) {
    if (ends_with_gz(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (!f) throw std::runtime_error("cannot open " + path);
        std::string pending;
        char buf[1 << 16];
        int n;
        std::size_t line_no = 0;
        while ((n = gzread(f, buf, sizeof(buf))) > 0) {
            pending.append(buf, static_cast<std::size_t>(n));
            std::size_t pos = 0, nl;
            while ((nl = pending.find('\n', pos)) != std::string::npos) {
                fn(pending.substr(pos, nl - pos), ++line_no);
                pos = nl + 1;
            }
            pending.erase(0, pos);
        }
        int err = 0;
        gzerror(f, &err);
        gzclose(f);
        if (err != Z_OK && err != Z_STREAM_END) {
            throw std::runtime_error("gzip read error in " + path);
        }
        if (!pending.empty()) fn(pending, ++line_no);
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            fn(line, ++line_no);
        }
    }
}

}  // namespace

std::string encode_query(const Query& q) {
    std::ostringstream os;
    os << "{\"t\":\"q\",\"id\":" << json_escape(q.id) << ",\"text\":" << json_escape(q.text)
       << ",\"lang\":" << json_escape(q.language.code) << "}";
    return os.str();
}

std::string encode_passage(const Passage& p) {
    std::ostringstream os;
    os << "{\"t\":\"p\",\"id\":" << json_escape(p.id) << ",\"text\":" << json_escape(p.text)
       << ",\"lang\":" << json_escape(p.language.code) << "}";
    return os.str();
}

std::string encode_instance(const GradedInstance& gi) {
    std::ostringstream os;
    os << "{\"t\":\"i\",\"qid\":" << json_escape(gi.query_id)
       << ",\"pid\":" << json_escape(gi.passage_id) << ",\"score\":" << gi.score.value()
       << ",\"lang\":" << json_escape(gi.language.code)
       << ",\"annotator\":" << json_escape(gi.annotator_id) << "}";
    return os.str();
}

Dataset read_dataset(const std::string& path) {
    Dataset ds;
    for_each_line(path, [&](const std::string& line, std::size_t line_no) {
        if (trimmed(line).empty()) return;
        parse_line(line, line_no, path, ds);
    });
    return ds;
}

void write_dataset(const Dataset& ds, const std::string& path) {
    std::ostringstream os;
    for (const auto& q : ds.queries) os << encode_query(q) << "\n";
    for (const auto& p : ds.passages) os << encode_passage(p) << "\n";
    for (const auto& gi : ds.instances) os << encode_instance(gi) << "\n";
    const std::string body = os.str();
    if (ends_with_gz(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f) throw std::runtime_error("cannot open " + path + " for writing");
        if (!body.empty() &&
            gzwrite(f, body.data(), static_cast<unsigned>(body.size())) !=
                static_cast<int>(body.size())) {
            gzclose(f);
            throw std::runtime_error("gzip write error in " + path);
        }
        gzclose(f);
    } else {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path + " for writing");
        out << body;
        if (!out) throw std::runtime_error("write error in " + path);
    }
}

}  // namespace gradrel
