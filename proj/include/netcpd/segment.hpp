#pragma once

#include "netcpd/detect.hpp"

#include <string>
#include <utility>
#include <vector>

namespace netcpd {

struct Detection {
    Index k = 0;
    double p_value = 1.0;
    Index parent_t = 0;  // interval in which the change was found
    Index parent_t_prime = 0;
    Index depth = 0;     // recursion depth (0 for sliding scans)
};

enum class Procedure { segment, sliding };

struct ChangePointReport {
    ScanConfig config;
    Procedure procedure = Procedure::segment;
    Index window_length = 0;  // sliding scans only
    Index stride = 0;
    std::vector<Detection> detected;  // strictly increasing k
    std::vector<WindowScan> scanned;  // in test order
};

/**
 * Depth-first binary segmentation of [t, t_prime]: test the interval, and on
 * rejection at k* recurse into [t, k*] and [k* + 1, t_prime]. Intervals with
 * fewer than 2*delta + 1 points are not tested.
 */
ChangePointReport segment_recursive(const ReturnsPanel& panel, Index t, Index t_prime, const ScanConfig& config);

/**
 * Intervals [s, s + window_length] for s = 0, stride, 2*stride, ...; a final
 * interval clipped to the panel end is kept when it still has candidates.
 * Throws when the panel is shorter than one full window.
 */
std::vector<std::pair<Index, Index>> sliding_windows(Index length, Index window_length, Index stride, Index delta);

/// Tests every sliding window and merges detections; detections from different
/// windows closer than delta collapse to the one with the smaller p-value.
ChangePointReport sliding_scan(const ReturnsPanel& panel, Index window_length, Index stride,
                               const ScanConfig& config);

}  // namespace netcpd
