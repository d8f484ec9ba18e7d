#include "netcpd/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace netcpd {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string token;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(token);
            token.clear();
        } else {
            token.push_back(ch);
        }
    }
    fields.push_back(token);
    return fields;
}

std::string trim(const std::string& value) {
    const auto first = value.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = value.find_last_not_of(" \t\r\n");
    return value.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_level(const std::string& field, std::size_t line_no, const std::string& ticker) {
    if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw LoadError("line " + std::to_string(line_no) + ": invalid value '" + field +
                        "' for " + ticker);
    }
    return value;
}

}  // namespace

PricePanel parse_prices(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    std::size_t line_no = 0;

    // header
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!trim(line).empty()) {
            header = split_line(line);
            break;
        }
    }
    if (header.empty()) throw LoadError("empty panel file");
    for (auto& h : header) h = trim(h);
    if (lower(header[0]) != "date") {
        throw LoadError("malformed header: first column must be 'date'");
    }

    PricePanel panel;
    panel.tickers.assign(header.begin() + 1, header.end());
    if (panel.tickers.size() < 2) {
        throw LoadError("panel needs at least 2 entities, found " +
                        std::to_string(panel.tickers.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& t : panel.tickers) {
        if (t.empty()) throw LoadError("malformed header: empty ticker name");
        if (!seen.insert(t).second) throw LoadError("duplicate ticker '" + t + "'");
    }

    const std::size_t n = panel.tickers.size();
    std::vector<std::vector<double>> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != n + 1) {
            throw LoadError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(n + 1) + " fields, found " +
                            std::to_string(fields.size()));
        }
        Date date;
        try {
            date = parse_iso_date(trim(fields[0]));
        } catch (const std::invalid_argument& e) {
            throw LoadError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!panel.dates.empty() && date <= panel.dates.back()) {
            throw LoadError("line " + std::to_string(line_no) + ": non-monotone dates at " +
                            format_iso_date(date));
        }
        panel.dates.push_back(date);
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = parse_level(trim(fields[i + 1]), line_no, panel.tickers[i]);
        }
        columns.push_back(std::move(column));
    }
    if (columns.empty()) throw LoadError("panel has no data rows");

    panel.levels.resize(static_cast<Index>(n), static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            panel.levels(static_cast<Index>(i), static_cast<Index>(j)) = columns[j][i];
        }
    }
    return panel;
}

PricePanel load_prices(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw LoadError("cannot open panel file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_prices(buffer.str());
}

PricePanel align_and_fill(const PricePanel& panel, const FillPolicy& policy) {
    const Index n = panel.n();
    const Index cols = panel.levels.cols();
    if (policy.max_missing_fraction < 0.0 || policy.max_missing_fraction > 1.0) {
        throw std::invalid_argument("max_missing_fraction must lie in [0, 1]");
    }

    for (Index i = 0; i < n; ++i) {
        const Index missing = (panel.levels.row(i).array().isNaN()).count();
        if (static_cast<double>(missing) > policy.max_missing_fraction * static_cast<double>(cols)) {
            throw LoadError("entity '" + panel.tickers[static_cast<std::size_t>(i)] + "' is missing " +
                            std::to_string(missing) + " of " + std::to_string(cols) + " dates");
        }
    }

    // first column at which every entity has been observed at least once
    Index start = 0;
    for (Index i = 0; i < n; ++i) {
        Index first = 0;
        while (first < cols && std::isnan(panel.levels(i, first))) ++first;
        if (first == cols) {
            throw LoadError("entity '" + panel.tickers[static_cast<std::size_t>(i)] + "' has no values");
        }
        start = std::max(start, first);
    }

    Eigen::MatrixXd filled = panel.levels;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 1; j < cols; ++j) {
            if (std::isnan(filled(i, j))) filled(i, j) = filled(i, j - 1);
        }
    }

    PricePanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + start, panel.dates.end());
    out.levels = filled.rightCols(cols - start);
    return out;
}

ReturnsPanel compute_returns(const PricePanel& panel) {
    const Index cols = panel.levels.cols();
    if (cols < 2) throw std::invalid_argument("need at least 2 level dates to compute returns");
    if (!panel.levels.allFinite()) {
        throw std::invalid_argument("levels contain missing or non-finite values; run align_and_fill first");
    }
    ReturnsPanel out;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.returns = panel.levels.rightCols(cols - 1) - panel.levels.leftCols(cols - 1);
    return out;
}

void write_prices(const std::filesystem::path& path, const PricePanel& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "date";
    for (const auto& t : panel.tickers) out << ',' << t;
    out << '\n';
    char buf[32];
    for (Index j = 0; j < panel.levels.cols(); ++j) {
        out << format_iso_date(panel.dates[static_cast<std::size_t>(j)]);
        for (Index i = 0; i < panel.n(); ++i) {
            out << ',';
            const double v = panel.levels(i, j);
            if (!std::isnan(v)) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace netcpd
