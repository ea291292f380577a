#pragma once

#include <string>
#include <vector>

namespace dcprot {

/// One non-blank, non-comment record of a structured text document.
struct DocRecord {
    int line_no = 0;
    std::vector<std::string> fields; // whitespace-separated
};

struct DocSection {
    std::string name;
    int line_no = 0;
    std::vector<DocRecord> records;
};

/// Shared reader for the repo's document formats: '#' starts a comment,
/// '[name]' opens a section, records are whitespace-separated fields.
/// Throws ParseError for malformed section headers or records outside any
/// section.
std::vector<DocSection> read_document(const std::string& text, const std::string& origin);

/// Slurps a file; throws std::ios_base::failure (an I/O error, distinct from
/// ParseError) when the file cannot be read.
std::string read_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

double parse_double(const DocRecord& rec, size_t field, const std::string& origin);
double parse_double_field(const std::string& token, int line_no, const std::string& origin);

} // namespace dcprot
