#include "cascata/ioutil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cascata/errors.hpp"

namespace cascata {

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::string format_double(double v) { return format_double(v, 12); }

std::string format_percent(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0) throw_invalid("format_percent: non-positive denominator");
    // round(100 * num / den) at two decimals, half away from zero
    const double scaled = 10000.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
    const long long hundredths = std::llround(scaled);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%lld.%02lld", hundredths / 100, std::llabs(hundredths % 100));
    return buf;
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (const char c : s) {
        const unsigned char uc = static_cast<unsigned char>(c);
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (uc < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", uc);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    return out;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot read file for digest: " + path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

int TsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

TsvTable read_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open TSV file: " + path);
    TsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw_empty("empty TSV file: " + path);
    strip_cr(line);
    for (const auto field : split_tabs(line)) table.header.emplace_back(field);
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> row;
        for (const auto field : split_tabs(line)) row.emplace_back(field);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> read_tsv_column(const std::string& path, const std::string& column,
                                    const std::string& filter_column,
                                    const std::string& filter_value) {
    const TsvTable table = read_tsv(path);
    const int col = table.column(column);
    if (col < 0) throw_parse("TSV file " + path + " has no column '" + column + "'");
    int fcol = -1;
    if (!filter_column.empty()) {
        fcol = table.column(filter_column);
        if (fcol < 0) throw_parse("TSV file " + path + " has no column '" + filter_column + "'");
    }
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (static_cast<std::size_t>(col) >= row.size()) continue;
        if (fcol >= 0 && (static_cast<std::size_t>(fcol) >= row.size() || row[fcol] != filter_value))
            continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(row[col], &pos);
            if (pos != row[col].size()) throw_parse("trailing characters");
            values.push_back(v);
        } catch (const std::exception&) {
            throw_parse("non-numeric value '" + row[col] + "' in column '" + column + "' of " + path);
        }
    }
    return values;
}

std::vector<std::string> tsv_distinct_values(const std::string& path, const std::string& column) {
    const TsvTable table = read_tsv(path);
    const int col = table.column(column);
    if (col < 0) throw_parse("TSV file " + path + " has no column '" + column + "'");
    std::vector<std::string> values;
    for (const auto& row : table.rows) {
        if (static_cast<std::size_t>(col) < row.size()) values.push_back(row[col]);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot open output file: " + path);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace cascata
