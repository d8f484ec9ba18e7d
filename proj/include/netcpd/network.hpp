#pragma once

#include "netcpd/panel.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netcpd {

/// Raised when data make a statistic undefined (zero spread, singular matrix, ...).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NetworkFamily { gaussian_kernel, correlation, partial_correlation, epsilon_neighborhood };

std::string_view to_string(NetworkFamily family);
/// Accepts the CLI spellings (gaussian, correlation, partial, epsilon) and the full names.
NetworkFamily parse_network_family(std::string_view text);

struct NetworkConfig {
    NetworkFamily family = NetworkFamily::gaussian_kernel;
    /// Kernel bandwidth sigma^2. Empty selects the median heuristic.
    std::optional<double> sigma2;
    /// Distance threshold for the epsilon-neighborhood family.
    std::optional<double> epsilon;
    /// Ridge added to the correlation matrix before inversion (partial correlation).
    double ridge = 1e-4;

    /// Throws std::invalid_argument on sigma2 <= 0, epsilon <= 0 (or missing for
    /// the epsilon family), or ridge < 0.
    void validate() const;
};

/// Symmetric, zero-diagonal n x n weight matrix of one window.
struct Adjacency {
    Eigen::MatrixXd weights;

    Index n() const { return weights.rows(); }
};

/// Columns [first, last] (inclusive, 0-based) of the panel, without copying.
Window window_slice(const ReturnsPanel& panel, Index first, Index last);

/// Median over pairs i<j of ||Y_i - Y_j||^2 / L.
double median_heuristic_sigma2(Window window);

/// w_ij = exp(-D_ij / (2 sigma^2)), D_ij = ||Y_i - Y_j||^2 / L.
Adjacency gaussian_kernel_adjacency(Window window, double sigma2);

/// w_ij = |Pearson r_ij|. `labels`, when given, name the offending entity in errors.
Adjacency correlation_adjacency(Window window, std::span<const std::string> labels = {});

/// w_ij = |rho_ij| from the inverse of (R + ridge I).
Adjacency partial_correlation_adjacency(Window window, double ridge);

/// w_ij = 1 when sqrt(||Y_i - Y_j||^2 / L) <= epsilon.
Adjacency epsilon_adjacency(Window window, double epsilon);

/// Bandwidth to use for `window`: the fixed value if configured, else the median heuristic.
/// Returns 0 for families that ignore it.
double resolve_sigma2(Window window, const NetworkConfig& config);

/// Dispatches on config.family. `sigma2` is used only by the kernel family.
Adjacency build_adjacency(Window window, const NetworkConfig& config, double sigma2,
                          std::span<const std::string> labels = {});

/**
 * Adjacency matrices of arbitrary contiguous sub-windows of one interval.
 *
 * Sufficient statistics are accumulated once per interval as running sums over
 * columns, so each sub-window costs O(n^2) (O(n^3) for partial correlation)
 * instead of O(n^2 L). Results agree with the direct constructors up to
 * floating-point rounding.
 */
class SubwindowNetworks {
public:
    SubwindowNetworks(Window interval, const NetworkConfig& config, double sigma2,
                      std::span<const std::string> labels = {});

    Index n() const { return n_; }
    Index length() const { return length_; }

    /// Adjacency of local columns [first, last], inclusive.
    void compute(Index first, Index last, Eigen::MatrixXd& out) const;
    Adjacency compute(Index first, Index last) const;

private:
    void correlation_matrix(Index first, Index last, Eigen::MatrixXd& out) const;

    NetworkConfig config_;
    double sigma2_ = 0.0;
    Index n_ = 0;
    Index length_ = 0;
    std::vector<std::string> labels_;
    // Running column sums; column c holds the sum over local columns [0, c).
    Eigen::MatrixXd pair_sq_prefix_;   // pairs x (L+1), squared row differences
    Eigen::MatrixXd value_prefix_;     // n x (L+1), centered values
    Eigen::MatrixXd cross_prefix_;     // n(n+1)/2 x (L+1), centered cross products
    Eigen::VectorXd total_sq_;         // per-row total sum of squares over the interval
};

}  // namespace netcpd
