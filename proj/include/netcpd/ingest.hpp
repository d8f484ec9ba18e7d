#pragma once

#include "netcpd/panel.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace netcpd {

class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MissingPolicy { forward_fill };

struct FillPolicy {
    MissingPolicy policy = MissingPolicy::forward_fill;
    /// An entity missing more than this fraction of dates is rejected.
    double max_missing_fraction = 0.2;
};

/**
 * Loads a panel CSV: header `date,<ticker1>,...,<tickerN>`, ISO dates in the
 * first column, decimal levels elsewhere, empty field = missing (NaN).
 *
 * Throws LoadError on unreadable or malformed files, non-increasing dates,
 * duplicate tickers, or fewer than two entities.
 */
PricePanel load_prices(const std::filesystem::path& path);

/// Same contract as load_prices, reading from an in-memory CSV document.
PricePanel parse_prices(const std::string& csv_text);

/**
 * Forward-fills missing levels. Leading gaps drop the affected dates for all
 * entities so the matrix stays rectangular. Idempotent.
 */
PricePanel align_and_fill(const PricePanel& panel, const FillPolicy& policy = {});

ReturnsPanel compute_returns(const PricePanel& panel);

/// Writes levels in the panel CSV format, full round-trip precision.
void write_prices(const std::filesystem::path& path, const PricePanel& panel);

}  // namespace netcpd
