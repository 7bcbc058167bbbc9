#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cascata {

// Formatting is pinned so identical runs emit identical bytes.
std::string format_double(double v);                 // %.12g
std::string format_double(double v, int precision);  // %.{p}g

// Percentage with two decimals, half away from zero: (43415, 96065) -> "45.19".
std::string format_percent(std::int64_t numerator, std::int64_t denominator);

std::string json_escape(std::string_view s);

// floor division that is exact for negative numerators
std::int64_t floor_div(std::int64_t a, std::int64_t b);

// FNV-1a 64-bit over a file's bytes, lowercase hex. Used for run manifests.
std::string file_digest_hex(const std::string& path);

std::vector<std::string_view> split_tabs(std::string_view line);

// Minimal TSV table with a header row.
struct TsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const; // -1 when absent
};

TsvTable read_tsv(const std::string& path);

// Extracts one numeric column; optional exact-match filter on another column.
std::vector<double> read_tsv_column(const std::string& path, const std::string& column,
                                    const std::string& filter_column = "",
                                    const std::string& filter_value = "");

std::vector<std::string> tsv_distinct_values(const std::string& path, const std::string& column);

std::ofstream open_output(const std::string& path);
std::string read_file(const std::string& path);

} // namespace cascata
