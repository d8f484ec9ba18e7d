#include "netcpd/network.hpp"

#include "network_detail.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace netcpd {

namespace {

void require_finite(Window window) {
    if (!window.allFinite()) throw std::invalid_argument("window contains non-finite values");
}

void require_nonempty(Window window) {
    if (window.rows() < 1 || window.cols() < 1) throw std::invalid_argument("empty window");
}

// ||Y_i - Y_j||^2 / L, summed column by column.
double normalized_sq_distance(Window window, Index i, Index j) {
    double sum = 0.0;
    for (Index c = 0; c < window.cols(); ++c) {
        const double diff = window(i, c) - window(j, c);
        sum += diff * diff;
    }
    return sum / static_cast<double>(window.cols());
}

std::string entity_name(std::span<const std::string> labels, Index i) {
    if (static_cast<std::size_t>(i) < labels.size()) return "'" + labels[static_cast<std::size_t>(i)] + "'";
    return "at row " + std::to_string(i);
}

}  // namespace

std::string_view to_string(NetworkFamily family) {
    switch (family) {
        case NetworkFamily::gaussian_kernel: return "gaussian-kernel";
        case NetworkFamily::correlation: return "correlation";
        case NetworkFamily::partial_correlation: return "partial-correlation";
        case NetworkFamily::epsilon_neighborhood: return "epsilon-neighborhood";
    }
    return "unknown";
}

NetworkFamily parse_network_family(std::string_view text) {
    if (text == "gaussian" || text == "gaussian-kernel") return NetworkFamily::gaussian_kernel;
    if (text == "correlation") return NetworkFamily::correlation;
    if (text == "partial" || text == "partial-correlation") return NetworkFamily::partial_correlation;
    if (text == "epsilon" || text == "epsilon-neighborhood") return NetworkFamily::epsilon_neighborhood;
    throw std::invalid_argument("unknown network family '" + std::string(text) + "'");
}

void NetworkConfig::validate() const {
    if (sigma2 && !(*sigma2 > 0.0 && std::isfinite(*sigma2))) {
        throw std::invalid_argument("sigma^2 must be strictly positive");
    }
    if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) {
        throw std::invalid_argument("epsilon must be strictly positive");
    }
    if (family == NetworkFamily::epsilon_neighborhood && !epsilon) {
        throw std::invalid_argument("the epsilon-neighborhood family requires an epsilon");
    }
    if (!(ridge >= 0.0 && std::isfinite(ridge))) throw std::invalid_argument("ridge must be >= 0");
}

Window window_slice(const ReturnsPanel& panel, Index first, Index last) {
    if (first < 0 || last < first || last >= panel.length()) {
        throw std::out_of_range("window [" + std::to_string(first) + ", " + std::to_string(last) +
                                "] outside panel of length " + std::to_string(panel.length()));
    }
    return panel.returns.middleCols(first, last - first + 1);
}

double median_heuristic_sigma2(Window window) {
    if (window.rows() < 2 || window.cols() < 1) {
        throw std::invalid_argument("median heuristic needs >= 2 nodes and >= 1 column");
    }
    require_finite(window);
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(window.rows() * (window.rows() - 1) / 2));
    for (Index i = 0; i < window.rows(); ++i) {
        for (Index j = i + 1; j < window.rows(); ++j) dist.push_back(normalized_sq_distance(window, i, j));
    }
    std::sort(dist.begin(), dist.end());
    const std::size_t m = dist.size();
    const double median = m % 2 == 1 ? dist[m / 2] : 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
    if (!(median > 0.0)) throw DegenerateError("zero median distance: rows are (mostly) identical");
    return median;
}

Adjacency gaussian_kernel_adjacency(Window window, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma^2 must be strictly positive");
    require_nonempty(window);
    require_finite(window);
    const Index n = window.rows();
    Adjacency adj{Eigen::MatrixXd::Zero(n, n)};
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double w = std::exp(-normalized_sq_distance(window, i, j) / (2.0 * sigma2));
            adj.weights(i, j) = w;
            adj.weights(j, i) = w;
        }
    }
    return adj;
}

namespace {

Eigen::MatrixXd signed_correlation(Window window, std::span<const std::string> labels) {
    if (window.cols() < 2) throw std::invalid_argument("correlation needs a window of length >= 2");
    require_finite(window);
    const Index n = window.rows();
    const Eigen::MatrixXd centered = window.colwise() - window.rowwise().mean();
    Eigen::VectorXd norms(n);
    for (Index i = 0; i < n; ++i) {
        norms(i) = std::sqrt(centered.row(i).squaredNorm());
        if (!(norms(i) > 0.0)) {
            throw DegenerateError("entity " + entity_name(labels, i) + " is constant within the window");
        }
    }
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double r = centered.row(i).dot(centered.row(j)) / (norms(i) * norms(j));
            corr(i, j) = corr(j, i) = std::clamp(r, -1.0, 1.0);
        }
    }
    return corr;
}

}  // namespace

Adjacency correlation_adjacency(Window window, std::span<const std::string> labels) {
    Adjacency adj{signed_correlation(window, labels).cwiseAbs()};
    adj.weights.diagonal().setZero();
    return adj;
}

Adjacency partial_correlation_adjacency(Window window, double ridge) {
    if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
    Adjacency adj;
    detail::partial_from_correlation(signed_correlation(window, {}), ridge, adj.weights);
    return adj;
}

Adjacency epsilon_adjacency(Window window, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be strictly positive");
    require_nonempty(window);
    require_finite(window);
    const Index n = window.rows();
    Adjacency adj{Eigen::MatrixXd::Zero(n, n)};
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double w = std::sqrt(normalized_sq_distance(window, i, j)) <= epsilon ? 1.0 : 0.0;
            adj.weights(i, j) = w;
            adj.weights(j, i) = w;
        }
    }
    return adj;
}

double resolve_sigma2(Window window, const NetworkConfig& config) {
    if (config.family != NetworkFamily::gaussian_kernel) return 0.0;
    if (config.sigma2) return *config.sigma2;
    return median_heuristic_sigma2(window);
}

Adjacency build_adjacency(Window window, const NetworkConfig& config, double sigma2,
                          std::span<const std::string> labels) {
    switch (config.family) {
        case NetworkFamily::gaussian_kernel: return gaussian_kernel_adjacency(window, sigma2);
        case NetworkFamily::correlation: return correlation_adjacency(window, labels);
        case NetworkFamily::partial_correlation: return partial_correlation_adjacency(window, config.ridge);
        case NetworkFamily::epsilon_neighborhood: return epsilon_adjacency(window, config.epsilon.value());
    }
    throw std::invalid_argument("unknown network family");
}

namespace detail {

void partial_from_correlation(const Eigen::MatrixXd& corr, double ridge, Eigen::MatrixXd& out) {
    const Index n = corr.rows();
    Eigen::MatrixXd regularized = corr;
    regularized.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-12)) {
        throw DegenerateError("correlation matrix is numerically singular; increase the ridge (now " +
                              std::to_string(ridge) + ")");
    }
    const Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(n, n));
    out.setZero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double rho = -precision(i, j) / std::sqrt(precision(i, i) * precision(j, j));
            const double w = std::min(1.0, std::abs(rho));
            out(i, j) = w;
            out(j, i) = w;
        }
    }
}

}  // namespace detail

}  // namespace netcpd
