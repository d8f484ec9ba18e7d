#pragma once

#include "netcpd/panel.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace netcpd {

struct RegimeSegment {
    Index length = 0;
    Eigen::MatrixXd covariance;  // symmetric positive definite
};

struct RegimeSpec {
    std::vector<RegimeSegment> segments;
    std::uint64_t seed = 0;

    Index total_length() const;
    /// Last return index of every segment except the final one.
    std::vector<Index> change_points() const;
    /// Throws std::invalid_argument on empty specs, non-positive lengths, size
    /// mismatch with n, or covariances that are not symmetric positive definite.
    void validate(Index n) const;
};

/// Zero-mean Gaussian columns, independent within each segment, drawn through
/// the Cholesky factor of the segment covariance. Segment s uses the child
/// stream (seed, s). Return dates are consecutive weekdays from 2000-01-04.
ReturnsPanel generate_panel(const RegimeSpec& spec, Index n);

/// Unit diagonal, `rho` within each block, 0 across blocks. Block sizes must
/// sum to n. Throws std::invalid_argument when the result is not positive definite.
Eigen::MatrixXd block_covariance(Index n, std::span<const Index> block_sizes, double rho);

/// Levels 100 + cumulative returns, dated one weekday before the first return.
/// compute_returns inverts this up to rounding.
PricePanel integrate_returns(const ReturnsPanel& returns, double base_level = 100.0);

}  // namespace netcpd
