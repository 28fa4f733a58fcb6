#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace combsense::csv {

// Shortest-roundtrip-safe decimal: 17 significant digits, "nan" for NaN.
std::string format_number(double value);

struct NumericTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

// Parses a numeric CSV with exactly one header line. Lines starting with '#'
// and blank lines are skipped. Throws ParseError carrying the line number.
NumericTable parse_numeric(std::string_view text, std::size_t columns);

std::string read_file(const std::filesystem::path& path);

} // namespace combsense::csv
