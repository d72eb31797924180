#include "rolin/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "rolin/errors.hpp"

namespace rolin {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Returns k for a header of the form <prefix><k>, k >= 1, or 0.
std::size_t column_index(std::string_view name, char prefix) {
    if (name.size() < 2 || name.front() != prefix) return 0;
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
    if (ec != std::errc{} || ptr != name.data() + name.size()) return 0;
    return k;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& label) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError("empty file: missing header row", 1);
    ++line_no;
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

    const auto header = split(line);
    std::size_t p = 0, q = 0;
    for (const auto& name : header) {
        if (q == 0 && column_index(name, 'x') == p + 1) {
            ++p;
        } else if (column_index(name, 'y') == q + 1) {
            ++q;
        } else {
            throw DataError("unexpected column '" + std::string(name) + "'; expected x1..xp then y1..yq", line_no);
        }
    }
    if (p == 0) throw DataError("no x columns in header", line_no);
    if (q == 0) throw DataError("no y columns in header", line_no);

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() != p + q)
            throw DataError("expected " + std::to_string(p + q) + " fields, found " + std::to_string(fields.size()),
                            line_no);
        for (const auto& f : fields) {
            if (f.empty()) throw DataError("missing field", line_no);
            double v = 0.0;
            const char* begin = f.data();
            if (*begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw DataError("cannot parse '" + std::string(f) + "' as a number", line_no);
            if (!std::isfinite(v)) throw DataError("nonfinite value '" + std::string(f) + "'", line_no);
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw SampleSizeError("dataset has no data rows (n = 0)");

    const auto n = static_cast<Eigen::Index>(rows);
    Dataset d{DataMatrix(n, static_cast<Eigen::Index>(p)), DataMatrix(n, static_cast<Eigen::Index>(q)), label};
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d.x.cols(); ++k) d.x(i, k) = values[at++];
        for (Eigen::Index k = 0; k < d.y.cols(); ++k) d.y(i, k) = values[at++];
    }
    return d;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_dataset(in, path);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& data) {
    for (Eigen::Index k = 0; k < data.p(); ++k) out << (k ? "," : "") << 'x' << k + 1;
    for (Eigen::Index k = 0; k < data.q(); ++k) out << ",y" << k + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index k = 0; k < data.p(); ++k) out << (k ? "," : "") << format_double(data.x(i, k));
        for (Eigen::Index k = 0; k < data.q(); ++k) out << ',' << format_double(data.y(i, k));
        out << '\n';
    }
}

void save_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_dataset(out, data);
    if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace rolin
