#include "netcpd/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netcpd {

namespace {

void segment_into(const ReturnsPanel& panel, Index t, Index t_prime, Index depth, const ScanConfig& config,
                  ChangePointReport& report) {
    if (t_prime - t < 2 * config.delta) return;
    const double alpha = config.bonferroni ? config.alpha / std::ldexp(1.0, static_cast<int>(depth)) : config.alpha;
    WindowScan scan = test_window_at_level(panel, t, t_prime, config, alpha);
    const std::optional<Index> cp = scan.change_point;
    const double p = scan.p_value;
    report.scanned.push_back(std::move(scan));
    if (!cp) return;

    segment_into(panel, t, *cp, depth + 1, config, report);
    report.detected.push_back(Detection{*cp, p, t, t_prime, depth});
    segment_into(panel, *cp + 1, t_prime, depth + 1, config, report);
}

}  // namespace

ChangePointReport segment_recursive(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config) {
    config.validate();
    if (t < 0 || t_prime >= panel.length() || t_prime < t) {
        throw std::out_of_range("interval outside panel");
    }
    candidate_indices(t, t_prime, config.delta);

    ChangePointReport report;
    report.config = config;
    report.procedure = Procedure::segment;
    segment_into(panel, t, t_prime, 0, config, report);
    return report;
}

std::vector<std::pair<Index, Index>> sliding_windows(Index length, Index window_length, Index stride, Index delta) {
    if (delta < 1) throw std::invalid_argument("delta must be >= 1");
    if (window_length < 2 * delta + 1) {
        throw std::invalid_argument("window length must be >= 2*delta + 1");
    }
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (length < window_length + 1) {
        throw std::invalid_argument("panel of length " + std::to_string(length) + " is shorter than one window of " +
                                    std::to_string(window_length + 1) + " points");
    }
    std::vector<std::pair<Index, Index>> windows;
    for (Index s = 0; s < length; s += stride) {
        const Index end = s + window_length;
        if (end <= length - 1) {
            windows.emplace_back(s, end);
            if (end == length - 1) break;
        } else {
            if (length - 1 - s >= 2 * delta) windows.emplace_back(s, length - 1);
            break;
        }
    }
    return windows;
}

ChangePointReport sliding_scan(const ReturnsPanel& panel, Index window_length, Index stride,
                               const ScanConfig& config) {
    config.validate();
    const auto windows = sliding_windows(panel.length(), window_length, stride, config.delta);
    const double alpha = config.bonferroni ? config.alpha / static_cast<double>(windows.size()) : config.alpha;

    ChangePointReport report;
    report.config = config;
    report.procedure = Procedure::sliding;
    report.window_length = window_length;
    report.stride = stride;

    std::vector<Detection> raw;
    for (const auto& [t, t_prime] : windows) {
        WindowScan scan = test_window_at_level(panel, t, t_prime, config, alpha);
        if (scan.change_point) raw.push_back(Detection{*scan.change_point, scan.p_value, t, t_prime, 0});
        report.scanned.push_back(std::move(scan));
    }

    std::stable_sort(raw.begin(), raw.end(), [](const Detection& a, const Detection& b) { return a.k < b.k; });
    for (const auto& d : raw) {
        if (!report.detected.empty() && d.k - report.detected.back().k < config.delta) {
            if (d.p_value < report.detected.back().p_value) report.detected.back() = d;
            continue;
        }
        report.detected.push_back(d);
    }
    return report;
}

}  // namespace netcpd
