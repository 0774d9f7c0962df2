#pragma once

#include <string>
#include <vector>

namespace nrl::csv {

// Minimal RFC-4180-ish CSV support: comma separator, double-quote quoting
// with "" escapes, \r\n or \n line endings, UTF-8 passthrough.

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_row(const std::string& line);

// Reads the whole file; first line is the header. Throws ParseError on
// unreadable files. Blank lines are skipped.
Table read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote, or newline.
std::string quote_field(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

// Fixed float formatting used for all CSV output (deterministic).
std::string format_double(double v);

} // namespace nrl::csv
