#pragma once

#include "netcpd/segment.hpp"

#include <filesystem>
#include <ostream>

#include <json.hpp>

namespace netcpd {

using OrderedJson = nlohmann::ordered_json;

/// Scan configuration echo. Worker count is deliberately absent: reports are
/// identical for any degree of parallelism.
OrderedJson config_to_json(const ScanConfig& config);

OrderedJson window_to_json(const WindowScan& scan, const ReturnsPanel& panel);

/// {config, windows: [...], detected: [...]}, dates resolved through `panel`.
OrderedJson report_to_json(const ChangePointReport& report, const ReturnsPanel& panel);

/// One row per candidate: date,k,d_obs,z_obs.
void write_ztrace_csv(const std::filesystem::path& path, const WindowScan& scan, const ReturnsPanel& panel);

/// Human-readable table of detected change points (date, p-value, interval).
void print_detections(std::ostream& out, const ChangePointReport& report, const ReturnsPanel& panel);

/// Serializes with 2-space indent and a trailing newline.
void write_json(const std::filesystem::path& path, const OrderedJson& doc);

}  // namespace netcpd
