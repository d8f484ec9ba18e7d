#include "netcpd/bootstrap.hpp"

#include "netcpd/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace netcpd {

std::string_view to_string(BootstrapKind kind) {
    return kind == BootstrapKind::iid ? "iid" : "sieve";
}

Eigen::MatrixXd iid_bootstrap_resample(Window window, Rng& rng) {
    const Index len = window.cols();
    if (len < 1) throw std::invalid_argument("cannot resample an empty window");
    Eigen::MatrixXd out(window.rows(), len);
    std::uniform_int_distribution<Index> pick(0, len - 1);
    for (Index c = 0; c < len; ++c) out.col(c) = window.col(pick(rng));
    return out;
}

SieveModel fit_sieve_model(Window window, Index max_order) {
    const Index n = window.rows();
    const Index len = window.cols();
    if (max_order < 0) throw std::invalid_argument("sieve max order must be >= 0");
    if (len <= max_order + 10) {
        throw std::invalid_argument("sieve bootstrap needs window length > max_order + 10");
    }
    if (!window.allFinite()) throw std::invalid_argument("window contains non-finite values");

    SieveModel model;
    model.max_order = max_order;
    model.length = len;
    model.orders.assign(static_cast<std::size_t>(n), 0);
    model.coefficients.assign(static_cast<std::size_t>(n), Eigen::VectorXd());
    model.fell_back.assign(static_cast<std::size_t>(n), false);
    model.means = window.rowwise().mean();

    const Index sample = len - max_order;
    model.residuals.resize(n, sample);

    for (Index i = 0; i < n; ++i) {
        const Eigen::VectorXd x = (window.row(i).array() - model.means(i)).transpose();
        const Eigen::VectorXd y = x.segment(max_order, sample);

        double best_aic = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_phi;
        Eigen::VectorXd best_resid;
        bool singular = false;
        for (Index p = 0; p <= max_order; ++p) {
            Eigen::VectorXd phi = Eigen::VectorXd::Zero(p);
            Eigen::VectorXd resid = y;
            if (p > 0) {
                Eigen::MatrixXd design(sample, p);
                for (Index r = 0; r < sample; ++r) {
                    for (Index k = 0; k < p; ++k) design(r, k) = x(max_order + r - k - 1);
                }
                Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
                qr.setThreshold(1e-10);
                if (qr.rank() < p) {
                    singular = true;
                    break;
                }
                phi = qr.solve(y);
                resid = y - design * phi;
            }
            const double rss = resid.squaredNorm();
            const double aic = rss > 0.0 ? static_cast<double>(sample) * std::log(rss / static_cast<double>(sample)) +
                                               2.0 * static_cast<double>(p)
                                         : -std::numeric_limits<double>::infinity();
            if (p == 0 || aic < best_aic) {
                best_aic = aic;
                best_phi = phi;
                best_resid = resid;
            }
        }
        if (singular) {
            best_phi = Eigen::VectorXd();
            best_resid = y;
            model.fell_back[static_cast<std::size_t>(i)] = true;
        }
        model.orders[static_cast<std::size_t>(i)] = best_phi.size();
        model.coefficients[static_cast<std::size_t>(i)] = best_phi;
        model.residuals.row(i) = (best_resid.array() - best_resid.mean()).transpose();
    }
    return model;
}

Eigen::MatrixXd sieve_resample(const SieveModel& model, Rng& rng) {
    const Index n = model.residuals.rows();
    const Index pool = model.residuals.cols();
    const Index burn = model.max_order;
    const Index total = model.length + burn;
    if (pool < 1) throw std::invalid_argument("sieve model has no residuals");

    std::vector<Index> draws(static_cast<std::size_t>(total));
    std::uniform_int_distribution<Index> pick(0, pool - 1);
    for (auto& d : draws) d = pick(rng);

    Eigen::MatrixXd out(n, model.length);
    Eigen::VectorXd series(total);
    for (Index i = 0; i < n; ++i) {
        const Eigen::VectorXd& phi = model.coefficients[static_cast<std::size_t>(i)];
        for (Index s = 0; s < total; ++s) {
            double v = model.residuals(i, draws[static_cast<std::size_t>(s)]);
            for (Index k = 0; k < phi.size() && k < s; ++k) v += phi(k) * series(s - k - 1);
            series(s) = v;
        }
        out.row(i) = (series.tail(model.length).array() + model.means(i)).transpose();
    }
    return out;
}

Eigen::MatrixXd sieve_bootstrap_resample(Window window, Index max_order, Rng& rng) {
    return sieve_resample(fit_sieve_model(window, max_order), rng);
}

Eigen::VectorXd durbin_watson(Window window) {
    if (window.cols() < 3) throw std::invalid_argument("Durbin-Watson needs a window of length >= 3");
    const Index n = window.rows();
    Eigen::VectorXd dw(n);
    for (Index i = 0; i < n; ++i) {
        const Eigen::RowVectorXd e = window.row(i).array() - window.row(i).mean();
        const double denom = e.squaredNorm();
        if (!(denom > 0.0)) {
            throw DegenerateError("Durbin-Watson undefined: entity at row " + std::to_string(i) +
                                  " has zero variance");
        }
        double num = 0.0;
        for (Index j = 1; j < e.size(); ++j) {
            const double diff = e(j) - e(j - 1);
            num += diff * diff;
        }
        dw(i) = num / denom;
    }
    return dw;
}

Eigen::VectorXd durbin_watson(const ReturnsPanel& panel, Index t, Index t_prime) {
    return durbin_watson(window_slice(panel, t, t_prime));
}

BootstrapKind select_bootstrap(std::span<const double> dw, const DwBand& band) {
    for (double v : dw) {
        if (v < band.lower || v > band.upper) return BootstrapKind::sieve;
    }
    return BootstrapKind::iid;
}

}  // namespace netcpd
