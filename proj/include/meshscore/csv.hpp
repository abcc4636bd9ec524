#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace meshscore::csv {

// RFC 4180 field quoting: fields containing a comma, quote or newline are
// wrapped in double quotes with embedded quotes doubled.
std::string quote(std::string_view field);

std::string join(const std::vector<std::string>& fields);

// Splits one record. Quoted fields may not span lines.
std::vector<std::string> split(std::string_view line);

// Reads the next non-empty line, stripping a trailing '\r'. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no);

std::int64_t to_int(std::string_view s, std::size_t line_no);
std::uint64_t to_uint(std::string_view s, std::size_t line_no);
double to_double(std::string_view s, std::size_t line_no);

// Shortest round-trip representation.
std::string format_double(double v);

std::string_view trim(std::string_view s);

}  // namespace meshscore::csv
