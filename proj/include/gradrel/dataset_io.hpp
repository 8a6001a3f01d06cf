#pragma once
// Canonical dataset file format: UTF-8, one JSON object per line, with a type
// tag per record ("q" query, "p" passage, "i" instance). Field order is fixed
// for byte-reproducibility. Files ending in ".gz" are gzip-compressed.

#include <stdexcept>
#include <string>

#include "gradrel/core.hpp"

namespace gradrel {

struct ParseError : std::runtime_error {
    ParseError(const std::string& path, std::size_t line, const std::string& what_field)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what_field),
          file(path),
          line_number(line) {}
    std::string file;
    std::size_t line_number;
};

// Well-known codes get their conventional tier; anything else is medium.
// Tier is experiment metadata, not part of the wire format.
ResourceTier default_tier(const std::string& code);

Dataset read_dataset(const std::string& path);
void write_dataset(const Dataset& ds, const std::string& path);

// Single-record codecs, exposed for streaming callers.
std::string encode_query(const Query& q);
std::string encode_passage(const Passage& p);
std::string encode_instance(const GradedInstance& gi);

}  // namespace gradrel
