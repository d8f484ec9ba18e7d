#pragma once

#include "netcpd/panel.hpp"
#include "netcpd/rng.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace netcpd {

enum class BootstrapKind { iid, sieve };

std::string_view to_string(BootstrapKind kind);

/// Resamples whole time columns of the window uniformly with replacement.
/// All entities share the drawn indices, so contemporaneous dependence survives.
Eigen::MatrixXd iid_bootstrap_resample(Window window, Rng& rng);

/// Per-entity autoregressive fits backing the sieve bootstrap.
struct SieveModel {
    Index max_order = 0;
    Index length = 0;                           // window length L
    std::vector<Index> orders;                  // AIC-selected order per entity
    std::vector<Eigen::VectorXd> coefficients;  // phi_1..phi_p per entity
    std::vector<bool> fell_back;                // singular fit, order forced to 0
    Eigen::VectorXd means;                      // per-entity window mean
    Eigen::MatrixXd residuals;                  // n x (L - max_order), centered, common dates
};

/**
 * Fits AR(p), p in [0, max_order], to each mean-centered row by least squares on
 * the common sample [max_order, L) and keeps the order with the smallest AIC.
 * Requires L > max_order + 10.
 */
SieveModel fit_sieve_model(Window window, Index max_order);

/// One sieve replicate of length L: residual columns drawn jointly with
/// replacement drive each entity's AR recursion from zero history; the first
/// max_order values are discarded as burn-in.
Eigen::MatrixXd sieve_resample(const SieveModel& model, Rng& rng);

Eigen::MatrixXd sieve_bootstrap_resample(Window window, Index max_order, Rng& rng);

/// Durbin-Watson statistic per row of the mean-centered window, in [0, 4].
Eigen::VectorXd durbin_watson(Window window);
Eigen::VectorXd durbin_watson(const ReturnsPanel& panel, Index t, Index t_prime);

struct DwBand {
    double lower = 1.7;
    double upper = 2.3;
};

/// Sieve when any statistic lies strictly outside the band, otherwise iid.
BootstrapKind select_bootstrap(std::span<const double> dw, const DwBand& band);

}  // namespace netcpd
