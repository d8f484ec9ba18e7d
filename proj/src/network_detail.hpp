#pragma once

#include <Eigen/Dense>

namespace netcpd::detail {

/// |partial correlations| from a correlation matrix, via the inverse of (corr + ridge I).
void partial_from_correlation(const Eigen::MatrixXd& corr, double ridge, Eigen::MatrixXd& out);

}  // namespace netcpd::detail
