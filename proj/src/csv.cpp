// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#include "shortcut_audit/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "shortcut_audit/errors.hpp"

namespace shortcut_audit::csv {

std::vector<std::string> split_line(const std::string& line, const std::string& file,
                                    std::size_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i <= n) {
        if (i == n) {
            if (in_quotes) {
                throw ParseError(file + ":" + std::to_string(line_no) +
                                 ": unterminated quoted field");
            }
            fields.push_back(std::move(current));
            break;
        }
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            if (!current.empty()) {
                throw ParseError(file + ":" + std::to_string(line_no) +
                                 ": quote inside unquoted field");
            }
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
        ++i;
    }
    return fields;
}

void for_each_row(const std::filesystem::path& path,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& row_fn) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        row_fn(line_no, split_line(line, path.string(), line_no));
    }
}

std::string escape(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
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

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) return "0";
    return std::string(buffer, ptr);
}

double parse_double(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(what + ": not a finite number: \"" + text + "\"");
    }
    return value;
}

}  // namespace shortcut_audit::csv
