#include "netcpd/network.hpp"

#include "network_detail.hpp"

#include <algorithm>
#include <cmath>

namespace netcpd {

namespace {

// Relative threshold below which a sub-window variance computed from running
// sums is indistinguishable from cancellation noise.
constexpr double kVarianceFloor = 1e-12;

Index cross_index(Index i, Index j, Index n) {
    // upper triangle including the diagonal, row-major
    return i * n - i * (i - 1) / 2 + (j - i);
}

}  // namespace

SubwindowNetworks::SubwindowNetworks(Window interval, const NetworkConfig& config, double sigma2,
                                     std::span<const std::string> labels)
    : config_(config), sigma2_(sigma2), n_(interval.rows()), length_(interval.cols()),
      labels_(labels.begin(), labels.end()) {
    config_.validate();
    if (n_ < 2 || length_ < 1) throw std::invalid_argument("interval needs >= 2 nodes and >= 1 column");
    if (!interval.allFinite()) throw std::invalid_argument("interval contains non-finite values");
    if (config_.family == NetworkFamily::gaussian_kernel && !(sigma2_ > 0.0)) {
        throw std::invalid_argument("sigma^2 must be strictly positive");
    }

    switch (config_.family) {
        case NetworkFamily::gaussian_kernel:
        case NetworkFamily::epsilon_neighborhood: {
            const Index pairs = n_ * (n_ - 1) / 2;
            pair_sq_prefix_.resize(pairs, length_ + 1);
            pair_sq_prefix_.col(0).setZero();
            for (Index c = 0; c < length_; ++c) {
                Index p = 0;
                for (Index i = 0; i < n_; ++i) {
                    for (Index j = i + 1; j < n_; ++j, ++p) {
                        const double diff = interval(i, c) - interval(j, c);
                        pair_sq_prefix_(p, c + 1) = pair_sq_prefix_(p, c) + diff * diff;
                    }
                }
            }
            break;
        }
        case NetworkFamily::correlation:
        case NetworkFamily::partial_correlation: {
            const Eigen::MatrixXd centered = interval.colwise() - interval.rowwise().mean();
            value_prefix_.resize(n_, length_ + 1);
            cross_prefix_.resize(n_ * (n_ + 1) / 2, length_ + 1);
            value_prefix_.col(0).setZero();
            cross_prefix_.col(0).setZero();
            for (Index c = 0; c < length_; ++c) {
                value_prefix_.col(c + 1) = value_prefix_.col(c) + centered.col(c);
                for (Index i = 0; i < n_; ++i) {
                    for (Index j = i; j < n_; ++j) {
                        const Index p = cross_index(i, j, n_);
                        cross_prefix_(p, c + 1) = cross_prefix_(p, c) + centered(i, c) * centered(j, c);
                    }
                }
            }
            total_sq_ = centered.rowwise().squaredNorm();
            break;
        }
    }
}

void SubwindowNetworks::correlation_matrix(Index first, Index last, Eigen::MatrixXd& out) const {
    const double m = static_cast<double>(last - first + 1);
    if (last - first + 1 < 2) throw std::invalid_argument("correlation needs a window of length >= 2");
    Eigen::VectorXd sums = value_prefix_.col(last + 1) - value_prefix_.col(first);
    Eigen::VectorXd sd(n_);
    for (Index i = 0; i < n_; ++i) {
        const Index p = cross_index(i, i, n_);
        const double ss = cross_prefix_(p, last + 1) - cross_prefix_(p, first) - sums(i) * sums(i) / m;
        if (!(ss > kVarianceFloor * total_sq_(i))) {
            const std::string who = static_cast<std::size_t>(i) < labels_.size()
                                        ? "'" + labels_[static_cast<std::size_t>(i)] + "'"
                                        : "at row " + std::to_string(i);
            throw DegenerateError("entity " + who + " is constant within the window");
        }
        sd(i) = std::sqrt(ss);
    }
    out.setIdentity(n_, n_);
    for (Index i = 0; i < n_; ++i) {
        for (Index j = i + 1; j < n_; ++j) {
            const Index p = cross_index(i, j, n_);
            const double sxy = cross_prefix_(p, last + 1) - cross_prefix_(p, first) - sums(i) * sums(j) / m;
            out(i, j) = out(j, i) = std::clamp(sxy / (sd(i) * sd(j)), -1.0, 1.0);
        }
    }
}

void SubwindowNetworks::compute(Index first, Index last, Eigen::MatrixXd& out) const {
    if (first < 0 || last < first || last >= length_) {
        throw std::out_of_range("sub-window outside interval");
    }
    const double m = static_cast<double>(last - first + 1);
    switch (config_.family) {
        case NetworkFamily::gaussian_kernel:
        case NetworkFamily::epsilon_neighborhood: {
            out.setZero(n_, n_);
            const bool kernel = config_.family == NetworkFamily::gaussian_kernel;
            const double scale = 1.0 / (2.0 * sigma2_);
            const double eps = config_.epsilon.value_or(0.0);
            Index p = 0;
            for (Index i = 0; i < n_; ++i) {
                for (Index j = i + 1; j < n_; ++j, ++p) {
                    const double d = std::max(0.0, pair_sq_prefix_(p, last + 1) - pair_sq_prefix_(p, first)) / m;
                    const double w = kernel ? std::exp(-d * scale) : (std::sqrt(d) <= eps ? 1.0 : 0.0);
                    out(i, j) = w;
                    out(j, i) = w;
                }
            }
            break;
        }
        case NetworkFamily::correlation: {
            correlation_matrix(first, last, out);
            out = out.cwiseAbs();
            out.diagonal().setZero();
            break;
        }
        case NetworkFamily::partial_correlation: {
            Eigen::MatrixXd corr;
            correlation_matrix(first, last, corr);
            detail::partial_from_correlation(corr, config_.ridge, out);
            break;
        }
    }
}

Adjacency SubwindowNetworks::compute(Index first, Index last) const {
    Adjacency adj;
    compute(first, last, adj.weights);
    return adj;
}

}  // namespace netcpd
