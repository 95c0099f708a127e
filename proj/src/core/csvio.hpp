#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nightsense {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by name; throws input_error when absent.
    std::size_t col(const std::string& name) const;
    bool has_col(const std::string& name) const;
};

std::vector<std::string> split(const std::string& line, char sep);
std::string join(const std::vector<std::string>& parts, char sep);
std::string trim(const std::string& s);

// Parses one CSV document. Every row must have the same arity as the header.
CsvTable parse_csv(std::istream& in, const std::string& origin);
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

// Numeric cell helpers; an empty cell denotes a missing value.
double parse_double_cell(const std::string& cell, const std::string& origin);
std::int64_t parse_int_cell(const std::string& cell, const std::string& origin);

// Shortest round-trippable decimal form, "" for missing values.
std::string format_double(double v);
std::string format_int(std::int64_t v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace nightsense
