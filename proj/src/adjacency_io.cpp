#include "netcpd/adjacency_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netcpd {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    return out;
}

}  // namespace

void write_adjacency_csv(const std::filesystem::path& path, const Adjacency& adj,
                         const std::vector<std::string>& tickers) {
    if (static_cast<Index>(tickers.size()) != adj.n()) {
        throw std::invalid_argument("ticker count does not match adjacency size");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "node";
    for (const auto& t : tickers) out << ',' << t;
    out << '\n';
    char buf[32];
    for (Index i = 0; i < adj.n(); ++i) {
        out << tickers[static_cast<std::size_t>(i)];
        for (Index j = 0; j < adj.n(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", adj.weights(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
}

LabelledAdjacency read_adjacency_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty adjacency file");
    auto header = split(line);
    if (header.size() < 2 || header[0] != "node") throw std::runtime_error("malformed adjacency header");

    LabelledAdjacency result;
    result.tickers.assign(header.begin() + 1, header.end());
    const auto n = static_cast<Index>(result.tickers.size());
    result.adjacency.weights.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("adjacency file has too few rows");
        auto fields = split(line);
        if (static_cast<Index>(fields.size()) != n + 1) throw std::runtime_error("malformed adjacency row");
        for (Index j = 0; j < n; ++j) {
            const auto& f = fields[static_cast<std::size_t>(j + 1)];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                throw std::runtime_error("invalid weight '" + f + "'");
            }
            result.adjacency.weights(i, j) = v;
        }
    }
    return result;
}

nlohmann::json adjacency_to_json(const Adjacency& adj, const std::vector<std::string>& tickers) {
    nlohmann::json edges = nlohmann::json::array();
    for (Index i = 0; i < adj.n(); ++i) {
        for (Index j = i + 1; j < adj.n(); ++j) {
            edges.push_back({{"i", i}, {"j", j}, {"weight", adj.weights(i, j)}});
        }
    }
    return {{"tickers", tickers}, {"edges", edges}};
}

LabelledAdjacency adjacency_from_json(const nlohmann::json& doc) {
    LabelledAdjacency result;
    result.tickers = doc.at("tickers").get<std::vector<std::string>>();
    const auto n = static_cast<Index>(result.tickers.size());
    result.adjacency.weights = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : doc.at("edges")) {
        const auto i = e.at("i").get<Index>();
        const auto j = e.at("j").get<Index>();
        if (i < 0 || j < 0 || i >= n || j >= n) throw std::runtime_error("edge index out of range");
        result.adjacency.weights(i, j) = result.adjacency.weights(j, i) = e.at("weight").get<double>();
    }
    return result;
}

}  // namespace netcpd
