#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace exagg::csv {

/// One parsed CSV record plus the 1-based line it started on (for error
/// reporting against the source file).
struct Record {
    std::uint64_t line = 0;
    std::vector<std::string> fields;
};

/// RFC 4180-style parser: double-quoted fields, "" escapes, embedded commas
/// and newlines inside quotes. CRLF and LF both accepted.
inline std::vector<Record> parse(std::string_view text) {
    std::vector<Record> records;
    std::uint64_t line = 1;

    std::size_t i = 0;
    while (i < text.size()) {
        Record rec;
        rec.line = line;
        std::string field;
        bool in_quotes = false;
        bool record_done = false;
        while (i < text.size() && !record_done) {
            const char c = text[i];
            if (in_quotes) {
                if (c == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        in_quotes = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') ++line;
                    field.push_back(c);
                    ++i;
                }
            } else if (c == '"' && field.empty()) {
                in_quotes = true;
                ++i;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                ++i;
            } else if (c == '\n' || c == '\r') {
                if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
                ++i;
                ++line;
                record_done = true;
            } else {
                field.push_back(c);
                ++i;
            }
        }
        rec.fields.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    return records;
}

inline bool needs_quoting(std::string_view field) {
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
    }
    return false;
}

inline std::string escape(std::string_view field) {
    if (!needs_quoting(field)) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace exagg::csv
