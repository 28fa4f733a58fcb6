#include "combsense/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "combsense/errors.hpp"

namespace combsense::csv {

std::string format_number(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc{}) {
        throw NumericalError("failed to format number");
    }
    return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

double parse_field(std::string_view field, std::size_t line_no)
{
    if (field == "nan" || field == "NaN") {
        return std::nan("");
    }
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw ParseError("line " + std::to_string(line_no) + ": invalid number '" +
                             std::string(field) + "'",
                         line_no);
    }
    return value;
}

} // namespace

NumericTable parse_numeric(std::string_view text, std::size_t columns)
{
    NumericTable table;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto line = trim(text.substr(pos, nl - pos));
        ++line_no;
        pos = nl + 1;
        if (line.empty() || line.front() == '#') {
            if (nl == text.size()) {
                break;
            }
            continue;
        }
        const auto fields = split(line);
        if (!have_header) {
            for (auto f : fields) {
                table.header.emplace_back(f);
            }
            have_header = true;
        } else {
            if (fields.size() != columns) {
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " columns, found " +
                                     std::to_string(fields.size()),
                                 line_no);
            }
            std::vector<double> row;
            row.reserve(columns);
            for (auto f : fields) {
                row.push_back(parse_field(f, line_no));
            }
            table.rows.push_back(std::move(row));
            table.line_numbers.push_back(line_no);
        }
        if (nl == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw ParseError("missing header line", 0);
    }
    return table;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace combsense::csv
