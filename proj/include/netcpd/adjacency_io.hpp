#pragma once

#include "netcpd/network.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace netcpd {

struct LabelledAdjacency {
    std::vector<std::string> tickers;
    Adjacency adjacency;
};

/// Square CSV: header `node,<t1>,...,<tn>`, then one row per node led by its ticker.
/// Weights are written with 17 significant digits.
void write_adjacency_csv(const std::filesystem::path& path, const Adjacency& adj,
                         const std::vector<std::string>& tickers);

LabelledAdjacency read_adjacency_csv(const std::filesystem::path& path);

/// {"tickers": [...], "edges": [{"i", "j", "weight"}]} listing every pair i < j.
nlohmann::json adjacency_to_json(const Adjacency& adj, const std::vector<std::string>& tickers);

LabelledAdjacency adjacency_from_json(const nlohmann::json& doc);

}  // namespace netcpd
