// csv.hpp - minimal RFC-4180-ish CSV reader/writer (quoted fields, CRLF, BOM)
#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "servepred/errors.hpp"

namespace servepred {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, -1 when absent.
    int column(std::string_view name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

namespace detail {

// Reads one CSV record (possibly spanning newlines inside quotes).
// Returns false at end of stream with nothing read.
inline bool read_record(std::istream& in, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            in_quotes = true;
        } else if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else {
            field.push_back(ch);
        }
    }
    if (!any) return false;
    out.push_back(std::move(field));
    return true;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::vector<std::string> rec;
    if (detail::read_record(in, rec)) {
        // strip UTF-8 BOM from the first header cell
        if (!rec.empty() && rec[0].size() >= 3 &&
            static_cast<unsigned char>(rec[0][0]) == 0xEF &&
            static_cast<unsigned char>(rec[0][1]) == 0xBB &&
            static_cast<unsigned char>(rec[0][2]) == 0xBF)
            rec[0].erase(0, 3);
        t.header = std::move(rec);
    }
    while (detail::read_record(in, rec)) {
        if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
        rec.resize(t.header.size());                      // ragged rows padded
        t.rows.push_back(std::move(rec));
    }
    return t;
}

inline CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    return read_csv(in);
}

inline void write_csv_field(std::ostream& out, std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) {
        out << field;
        return;
    }
    out << '"';
    for (char ch : field) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        write_csv_field(out, fields[i]);
    }
    out << '\n';
}

}  // namespace servepred
