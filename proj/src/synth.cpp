#include "netcpd/synth.hpp"

#include "netcpd/rng.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netcpd {

namespace {

Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& cov, std::size_t segment) {
    if (!cov.isApprox(cov.transpose(), 1e-12) || !cov.allFinite()) {
        throw std::invalid_argument("segment " + std::to_string(segment) + ": covariance is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("segment " + std::to_string(segment) + ": covariance is not positive definite");
    }
    return llt.matrixL();
}

const Date kFirstSyntheticDate = Date{std::chrono::year{2000} / std::chrono::January / 3};

}  // namespace

Index RegimeSpec::total_length() const {
    Index total = 0;
    for (const auto& s : segments) total += s.length;
    return total;
}

std::vector<Index> RegimeSpec::change_points() const {
    std::vector<Index> out;
    Index end = 0;
    for (std::size_t s = 0; s + 1 < segments.size(); ++s) {
        end += segments[s].length;
        out.push_back(end - 1);
    }
    return out;
}

void RegimeSpec::validate(Index n) const {
    if (segments.empty()) throw std::invalid_argument("regime spec has no segments");
    if (n < 2) throw std::invalid_argument("need at least 2 entities");
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        if (seg.length < 1) throw std::invalid_argument("segment " + std::to_string(s) + ": length must be positive");
        if (seg.covariance.rows() != n || seg.covariance.cols() != n) {
            throw std::invalid_argument("segment " + std::to_string(s) + ": covariance is not " + std::to_string(n) +
                                        " x " + std::to_string(n));
        }
        cholesky_or_throw(seg.covariance, s);
    }
}

ReturnsPanel generate_panel(const RegimeSpec& spec, Index n) {
    spec.validate(n);
    ReturnsPanel panel;
    for (Index i = 0; i < n; ++i) panel.tickers.push_back("S" + std::to_string(i + 1));
    const Index total = spec.total_length();
    panel.returns.resize(n, total);

    Index col = 0;
    for (std::size_t s = 0; s < spec.segments.size(); ++s) {
        const auto& seg = spec.segments[s];
        const Eigen::MatrixXd chol = cholesky_or_throw(seg.covariance, s);
        Rng rng = make_stream(spec.seed, {static_cast<std::uint64_t>(s)});
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd z(n);
        for (Index c = 0; c < seg.length; ++c, ++col) {
            for (Index i = 0; i < n; ++i) z(i) = normal(rng);
            panel.returns.col(col) = chol * z;
        }
    }

    panel.dates.reserve(static_cast<std::size_t>(total));
    Date d = nth_weekday_from(kFirstSyntheticDate, 1);
    for (Index j = 0; j < total; ++j) {
        panel.dates.push_back(d);
        d = nth_weekday_from(d + std::chrono::days{1}, 0);
    }
    return panel;
}

Eigen::MatrixXd block_covariance(Index n, std::span<const Index> block_sizes, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (-1, 1)");
    const Index covered = std::accumulate(block_sizes.begin(), block_sizes.end(), Index{0});
    if (covered != n) throw std::invalid_argument("block sizes must sum to n");
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
    Index start = 0;
    for (Index size : block_sizes) {
        if (size < 1) throw std::invalid_argument("block sizes must be positive");
        for (Index i = start; i < start + size; ++i) {
            for (Index j = start; j < start + size; ++j) {
                if (i != j) cov(i, j) = rho;
            }
        }
        start += size;
    }
    if (Eigen::LLT<Eigen::MatrixXd>(cov).info() != Eigen::Success) {
        throw std::invalid_argument("block covariance is not positive definite for rho = " + std::to_string(rho));
    }
    return cov;
}

PricePanel integrate_returns(const ReturnsPanel& returns, double base_level) {
    PricePanel out;
    out.tickers = returns.tickers;
    const Index len = returns.length();
    if (len < 1 || returns.dates.empty()) throw std::invalid_argument("empty returns panel");
    // previous weekday before the first return date
    Date first = returns.dates.front() - std::chrono::days{1};
    while (std::chrono::weekday{first} == std::chrono::Saturday || std::chrono::weekday{first} == std::chrono::Sunday) {
        first -= std::chrono::days{1};
    }
    out.dates.push_back(first);
    out.dates.insert(out.dates.end(), returns.dates.begin(), returns.dates.end());
    out.levels.resize(returns.n(), len + 1);
    out.levels.col(0).setConstant(base_level);
    for (Index j = 0; j < len; ++j) out.levels.col(j + 1) = out.levels.col(j) + returns.returns.col(j);
    return out;
}

}  // namespace netcpd
