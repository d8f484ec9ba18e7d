#include "netcpd/detect.hpp"

#include "netcpd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace netcpd {

namespace {

// Everything about one interval test that does not depend on the replicate.
struct IntervalPlan {
    Index t = 0;
    Index t_prime = 0;
    Eigen::MatrixXd data;
    std::vector<Index> candidates;
    double sigma2 = 0.0;
    BootstrapKind kind = BootstrapKind::iid;
    Eigen::VectorXd dw;
    std::optional<SieveModel> sieve;
    std::uint64_t seed = 0;
};

IntervalPlan plan_interval(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config) {
    config.validate();
    IntervalPlan plan;
    plan.t = t;
    plan.t_prime = t_prime;
    plan.candidates = candidate_indices(t, t_prime, config.delta);
    plan.data = window_slice(panel, t, t_prime);
    plan.sigma2 = resolve_sigma2(plan.data, config.network);
    plan.seed = interval_seed(config.seed, t, t_prime);

    switch (config.bootstrap) {
        case BootstrapMode::iid: plan.kind = BootstrapKind::iid; break;
        case BootstrapMode::sieve: plan.kind = BootstrapKind::sieve; break;
        case BootstrapMode::auto_select: {
            plan.dw = durbin_watson(plan.data);
            plan.kind = select_bootstrap(std::span<const double>(plan.dw.data(), static_cast<std::size_t>(plan.dw.size())),
                                         config.dw_band);
            break;
        }
    }
    if (plan.kind == BootstrapKind::sieve) plan.sieve = fit_sieve_model(plan.data, config.sieve_max_order);
    return plan;
}

NullSample run_null(const IntervalPlan& plan, const ReturnsPanel& panel, const ScanConfig& config) {
    const auto reps = static_cast<std::size_t>(config.boot);
    const auto k_count = static_cast<Index>(plan.candidates.size());
    NullSample null;
    null.d_boot.resize(config.boot, k_count);

    parallel_for(reps, config.threads, [&](std::size_t b) {
        Rng rng = make_stream(plan.seed, {static_cast<std::uint64_t>(b)});
        const Eigen::MatrixXd resampled = plan.kind == BootstrapKind::iid ? iid_bootstrap_resample(plan.data, rng)
                                                                          : sieve_resample(*plan.sieve, rng);
        null.d_boot.row(static_cast<Index>(b)) =
            distance_curve(resampled, config.delta, config.network, plan.sigma2, panel.tickers).transpose();
    });

    null.d_bar = null.d_boot.colwise().mean().transpose();
    null.s.resize(k_count);
    for (Index k = 0; k < k_count; ++k) {
        const double ss = (null.d_boot.col(k).array() - null.d_bar(k)).square().sum();
        null.s(k) = std::sqrt(ss / static_cast<double>(config.boot - 1));
        if (!(null.s(k) > 0.0)) {
            throw DegenerateError("degenerate null spread at candidate k=" +
                                  std::to_string(plan.candidates[static_cast<std::size_t>(k)]));
        }
    }
    return null;
}

}  // namespace

std::string_view to_string(BootstrapMode mode) {
    switch (mode) {
        case BootstrapMode::iid: return "iid";
        case BootstrapMode::sieve: return "sieve";
        case BootstrapMode::auto_select: return "auto";
    }
    return "unknown";
}

BootstrapMode parse_bootstrap_mode(std::string_view text) {
    if (text == "iid") return BootstrapMode::iid;
    if (text == "sieve") return BootstrapMode::sieve;
    if (text == "auto") return BootstrapMode::auto_select;
    throw std::invalid_argument("unknown bootstrap mode '" + std::string(text) + "'");
}

void ScanConfig::validate() const {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (boot < 100) throw std::invalid_argument("bootstrap replicate count must be >= 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (sieve_max_order < 1) throw std::invalid_argument("sieve max order must be >= 1");
    if (!(dw_band.lower < dw_band.upper)) throw std::invalid_argument("Durbin-Watson band must have lower < upper");
    network.validate();
}

double window_distance(const Adjacency& w1, const Adjacency& w2) {
    if (w1.weights.rows() != w2.weights.rows() || w1.weights.cols() != w2.weights.cols()) {
        throw std::invalid_argument("adjacency dimension mismatch");
    }
    return (w1.weights - w2.weights).squaredNorm();
}

std::vector<Index> candidate_indices(Index t, Index t_prime, Index delta) {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (t_prime - t < 2 * delta) {
        throw std::invalid_argument("no candidates: interval [" + std::to_string(t) + ", " +
                                    std::to_string(t_prime) + "] is shorter than 2*delta + 1");
    }
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(t_prime - t - 2 * delta + 1));
    for (Index k = t + delta; k <= t_prime - delta; ++k) out.push_back(k);
    return out;
}

Eigen::VectorXd distance_curve(Window interval, Index delta, const NetworkConfig& network, double sigma2,
                               std::span<const std::string> labels) {
    const Index len = interval.cols();
    const auto candidates = candidate_indices(0, len - 1, delta);
    const SubwindowNetworks nets(interval, network, sigma2, labels);
    Eigen::VectorXd d(static_cast<Index>(candidates.size()));
    Eigen::MatrixXd left;
    Eigen::MatrixXd right;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Index k = candidates[c];
        nets.compute(0, k, left);
        nets.compute(k + 1, len - 1, right);
        d(static_cast<Index>(c)) = (left - right).squaredNorm();
    }
    return d;
}

Eigen::VectorXd observed_distances(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config) {
    config.validate();
    candidate_indices(t, t_prime, config.delta);
    const Window interval = window_slice(panel, t, t_prime);
    const double sigma2 = resolve_sigma2(interval, config.network);
    return distance_curve(interval, config.delta, config.network, sigma2, panel.tickers);
}

std::uint64_t interval_seed(std::uint64_t master, Index t, Index t_prime) {
    return derive_seed(master, {static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(t_prime)});
}

NullSample null_distribution(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config) {
    const IntervalPlan plan = plan_interval(panel, t, t_prime, config);
    return run_null(plan, panel, config);
}

Eigen::VectorXd standardize(const Eigen::VectorXd& d, const Eigen::VectorXd& d_bar, const Eigen::VectorXd& s) {
    if (d.size() != d_bar.size() || d.size() != s.size()) throw std::invalid_argument("size mismatch");
    return ((d - d_bar).array() / s.array()).matrix();
}

Index first_argmax(const Eigen::VectorXd& values) {
    if (values.size() == 0) throw std::invalid_argument("argmax of empty vector");
    Index best = 0;
    for (Index i = 1; i < values.size(); ++i) {
        if (values(i) > values(best)) best = i;
    }
    return best;
}

double bootstrap_p_value(std::span<const double> boot_max_z, double observed_max_z) {
    if (boot_max_z.empty()) throw std::invalid_argument("no bootstrap replicates");
    const auto hits = std::count_if(boot_max_z.begin(), boot_max_z.end(),
                                    [&](double z) { return z >= observed_max_z; });
    return static_cast<double>(hits) / static_cast<double>(boot_max_z.size());
}

WindowScan test_window_at_level(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config,
                                double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    const IntervalPlan plan = plan_interval(panel, t, t_prime, config);

    WindowScan scan;
    scan.t = t;
    scan.t_prime = t_prime;
    scan.candidates = plan.candidates;
    scan.sigma2 = plan.sigma2;
    scan.bootstrap = plan.kind;
    scan.durbin_watson = plan.dw;
    scan.alpha = alpha;
    if (plan.sieve) scan.sieve_orders = plan.sieve->orders;

    scan.d_obs = distance_curve(plan.data, config.delta, config.network, plan.sigma2, panel.tickers);
    const NullSample null = run_null(plan, panel, config);

    scan.z_obs = standardize(scan.d_obs, null.d_bar, null.s);
    scan.argmax = first_argmax(scan.z_obs);
    scan.max_z = scan.z_obs(scan.argmax);

    scan.boot_max_z.resize(static_cast<std::size_t>(config.boot));
    for (Index b = 0; b < config.boot; ++b) {
        const Eigen::VectorXd z = standardize(null.d_boot.row(b).transpose(), null.d_bar, null.s);
        scan.boot_max_z[static_cast<std::size_t>(b)] = z.maxCoeff();
    }
    scan.p_value = bootstrap_p_value(scan.boot_max_z, scan.max_z);
    if (scan.p_value < alpha) scan.change_point = scan.candidates[static_cast<std::size_t>(scan.argmax)];
    return scan;
}

WindowScan test_window(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config) {
    return test_window_at_level(panel, t, t_prime, config, config.alpha);
}

}  // namespace netcpd
