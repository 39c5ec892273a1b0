// Copyright 2026 shortcut-audit contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace shortcut_audit::csv {

/// Streams a CSV file row by row. Handles quoted fields with doubled
/// quotes and CRLF line endings; fields may not span lines. Throws
/// ParseError with file/line context on malformed input.
///
/// The callback receives the 1-based line number and the parsed fields.
/// The header row (line 1) is delivered like any other row.
void for_each_row(const std::filesystem::path& path,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& row_fn);

/// Splits one CSV line. Exposed for tests; line numbers only affect messages.
std::vector<std::string> split_line(const std::string& line, const std::string& file, std::size_t line_no);

/// Quotes a field if it contains a comma, quote or newline.
std::string escape(const std::string& field);

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double value);

/// Parses a double, rejecting trailing garbage, NaN and infinities.
/// Throws ParseError naming `what` on failure.
double parse_double(const std::string& text, const std::string& what);

}  // namespace shortcut_audit::csv
