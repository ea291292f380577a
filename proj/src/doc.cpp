#include "dcprot/doc.hpp"

#include "dcprot/common.hpp"

#include <fstream>
#include <sstream>

namespace dcprot {

std::vector<DocSection> read_document(const std::string& text, const std::string& origin) {
    std::vector<DocSection> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (fields >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;

        if (tokens[0].front() == '[') {
            if (tokens.size() != 1 || tokens[0].back() != ']' || tokens[0].size() < 3)
                throw ParseError(origin, line_no, "malformed section header '" + line + "'");
            sections.push_back({tokens[0].substr(1, tokens[0].size() - 2), line_no, {}});
            continue;
        }
        if (sections.empty())
            throw ParseError(origin, line_no, "record outside of any [section]");
        sections.back().records.push_back({line_no, std::move(tokens)});
    }
    return sections;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("error while reading '" + path + "'");
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::ios_base::failure("error while writing '" + path + "'");
}

double parse_double_field(const std::string& token, int line_no, const std::string& origin) {
    try {
        size_t pos = 0;
        double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin, line_no, "expected a number, got '" + token + "'");
    }
}

double parse_double(const DocRecord& rec, size_t field, const std::string& origin) {
    if (field >= rec.fields.size())
        throw ParseError(origin, rec.line_no, strformat("missing field %zu", field + 1));
    return parse_double_field(rec.fields[field], rec.line_no, origin);
}

} // namespace dcprot
