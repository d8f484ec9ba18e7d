#pragma once

#include "netcpd/calendar.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace netcpd {

using Index = Eigen::Index;

/// Read-only view of an n x L block of a panel (entities in rows, time in columns).
using Window = Eigen::Ref<const Eigen::MatrixXd>;

/// Level data as loaded from disk. Missing cells are NaN until align_and_fill runs.
struct PricePanel {
    std::vector<std::string> tickers;
    std::vector<Date> dates;
    Eigen::MatrixXd levels;  // n x dates.size()

    Index n() const { return levels.rows(); }
};

/// First differences of a PricePanel. Return j is labelled with the later of its two level dates.
struct ReturnsPanel {
    std::vector<std::string> tickers;
    std::vector<Date> dates;
    Eigen::MatrixXd returns;  // n x T

    Index n() const { return returns.rows(); }
    Index length() const { return returns.cols(); }
};

}  // namespace netcpd
