#pragma once

#include "netcpd/bootstrap.hpp"
#include "netcpd/network.hpp"
#include "netcpd/panel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace netcpd {

enum class BootstrapMode { iid, sieve, auto_select };

std::string_view to_string(BootstrapMode mode);
BootstrapMode parse_bootstrap_mode(std::string_view text);

struct ScanConfig {
    Index delta = 50;  // candidates stay this far from both interval ends
    Index boot = 1000;
    double alpha = 0.05;
    BootstrapMode bootstrap = BootstrapMode::iid;
    std::uint64_t seed = 42;
    NetworkConfig network;
    Index sieve_max_order = 5;
    DwBand dw_band;
    bool bonferroni = false;
    unsigned threads = 0;  // 0 = hardware concurrency; results never depend on it

    void validate() const;
};

/// Bootstrap replicates of the distance curve with their per-candidate mean and spread.
struct NullSample {
    Eigen::MatrixXd d_boot;  // B x |candidates|
    Eigen::VectorXd d_bar;
    Eigen::VectorXd s;       // unbiased (divisor B - 1)
};

/// Outcome of testing one interval [t, t_prime] of return indices.
struct WindowScan {
    Index t = 0;
    Index t_prime = 0;
    std::vector<Index> candidates;  // k = last index of the left sub-window
    Eigen::VectorXd d_obs;
    Eigen::VectorXd z_obs;
    double max_z = 0.0;
    Index argmax = 0;               // position in `candidates` of the largest z (first on ties)
    std::vector<double> boot_max_z;
    double p_value = 1.0;
    double alpha = 0.05;            // level actually applied (after any correction)
    std::optional<Index> change_point;
    double sigma2 = 0.0;
    BootstrapKind bootstrap = BootstrapKind::iid;
    Eigen::VectorXd durbin_watson;  // filled in auto mode only
    std::vector<Index> sieve_orders;
};

/// Squared Frobenius norm of W1 - W2.
double window_distance(const Adjacency& w1, const Adjacency& w2);

/// {t + delta, ..., t_prime - delta}. Throws std::invalid_argument when empty.
std::vector<Index> candidate_indices(Index t, Index t_prime, Index delta);

/**
 * d(k) for every local candidate k in [delta, L - 1 - delta] of `interval`:
 * distance between the adjacency of columns [0, k] and of [k + 1, L - 1].
 */
Eigen::VectorXd distance_curve(Window interval, Index delta, const NetworkConfig& network, double sigma2,
                               std::span<const std::string> labels = {});

/// Observed d(k) over [t, t_prime] with the bandwidth resolved on the whole interval.
Eigen::VectorXd observed_distances(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config);

/// Seed of the random stream owned by the test of [t, t_prime].
std::uint64_t interval_seed(std::uint64_t master, Index t, Index t_prime);

NullSample null_distribution(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config);

/// (d - d_bar) / s elementwise.
Eigen::VectorXd standardize(const Eigen::VectorXd& d, const Eigen::VectorXd& d_bar, const Eigen::VectorXd& s);

/// Position of the maximum; the first one on ties.
Index first_argmax(const Eigen::VectorXd& values);

/// Fraction of replicate maxima >= the observed maximum.
double bootstrap_p_value(std::span<const double> boot_max_z, double observed_max_z);

WindowScan test_window(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config);

/// As test_window, rejecting at `alpha` instead of config.alpha.
WindowScan test_window_at_level(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config,
                                double alpha);

}  // namespace netcpd
