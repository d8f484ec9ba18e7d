#include "netcpd/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace netcpd {

namespace {

std::string date_at(const ReturnsPanel& panel, Index k) {
    return format_iso_date(panel.dates.at(static_cast<std::size_t>(k)));
}

OrderedJson vector_json(const Eigen::VectorXd& v) {
    OrderedJson out = OrderedJson::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

std::string_view procedure_name(Procedure p) { return p == Procedure::segment ? "segment" : "sliding"; }

}  // namespace

OrderedJson config_to_json(const ScanConfig& config) {
    OrderedJson network;
    network["family"] = to_string(config.network.family);
    if (config.network.sigma2) {
        network["sigma2"] = *config.network.sigma2;
    } else {
        network["sigma2"] = "median";
    }
    network["epsilon"] = config.network.epsilon ? OrderedJson(*config.network.epsilon) : OrderedJson(nullptr);
    network["ridge"] = config.network.ridge;

    OrderedJson out;
    out["delta"] = config.delta;
    out["boot"] = config.boot;
    out["alpha"] = config.alpha;
    out["bootstrap"] = to_string(config.bootstrap);
    out["seed"] = config.seed;
    out["network"] = network;
    out["sieve_max_order"] = config.sieve_max_order;
    out["dw_band"] = {config.dw_band.lower, config.dw_band.upper};
    out["bonferroni"] = config.bonferroni;
    return out;
}

OrderedJson window_to_json(const WindowScan& scan, const ReturnsPanel& panel) {
    OrderedJson w;
    w["t"] = scan.t;
    w["t_prime"] = scan.t_prime;
    w["t_date"] = date_at(panel, scan.t);
    w["t_prime_date"] = date_at(panel, scan.t_prime);
    OrderedJson candidates = OrderedJson::array();
    for (Index k : scan.candidates) candidates.push_back(date_at(panel, k));
    w["candidates"] = candidates;
    w["sigma2"] = scan.sigma2;
    w["bootstrap"] = to_string(scan.bootstrap);
    if (scan.durbin_watson.size() > 0) w["durbin_watson"] = vector_json(scan.durbin_watson);
    if (!scan.sieve_orders.empty()) w["sieve_orders"] = scan.sieve_orders;
    w["d_obs"] = vector_json(scan.d_obs);
    w["z_obs"] = vector_json(scan.z_obs);
    w["max_z"] = scan.max_z;
    w["argmax_date"] = date_at(panel, scan.candidates.at(static_cast<std::size_t>(scan.argmax)));
    w["boot_Z"] = scan.boot_max_z;
    w["p_value"] = scan.p_value;
    w["alpha"] = scan.alpha;
    if (scan.change_point) {
        w["change_point"] = {{"k", *scan.change_point}, {"date", date_at(panel, *scan.change_point)}};
    } else {
        w["change_point"] = nullptr;
    }
    return w;
}

OrderedJson report_to_json(const ChangePointReport& report, const ReturnsPanel& panel) {
    OrderedJson doc;
    OrderedJson config = config_to_json(report.config);
    config["procedure"] = procedure_name(report.procedure);
    if (report.procedure == Procedure::sliding) {
        config["window"] = report.window_length;
        config["stride"] = report.stride;
    }
    doc["config"] = config;

    OrderedJson windows = OrderedJson::array();
    for (const auto& scan : report.scanned) windows.push_back(window_to_json(scan, panel));
    doc["windows"] = windows;

    OrderedJson detected = OrderedJson::array();
    for (const auto& d : report.detected) {
        OrderedJson entry;
        entry["date"] = date_at(panel, d.k);
        entry["k"] = d.k;
        entry["p_value"] = d.p_value;
        entry["parent_interval"] = {date_at(panel, d.parent_t), date_at(panel, d.parent_t_prime)};
        entry["depth"] = d.depth;
        detected.push_back(entry);
    }
    doc["detected"] = detected;
    return doc;
}

void write_ztrace_csv(const std::filesystem::path& path, const WindowScan& scan, const ReturnsPanel& panel) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "date,k,d_obs,z_obs\n";
    char buf[96];
    for (std::size_t c = 0; c < scan.candidates.size(); ++c) {
        const Index k = scan.candidates[c];
        std::snprintf(buf, sizeof(buf), ",%lld,%.17g,%.17g\n", static_cast<long long>(k),
                      scan.d_obs(static_cast<Index>(c)), scan.z_obs(static_cast<Index>(c)));
        out << date_at(panel, k) << buf;
    }
}

void print_detections(std::ostream& out, const ChangePointReport& report, const ReturnsPanel& panel) {
    out << "Change points (" << procedure_name(report.procedure) << ", " << to_string(report.config.network.family)
        << ", B=" << report.config.boot << ", alpha=" << report.config.alpha << ")\n";
    out << std::left << std::setw(12) << "Date" << std::setw(10) << "p-value" << "Interval\n";
    if (report.detected.empty()) {
        out << "(none)\n";
        return;
    }
    for (const auto& d : report.detected) {
        char p[16];
        std::snprintf(p, sizeof(p), "%.3f", d.p_value);
        out << std::setw(12) << date_at(panel, d.k) << std::setw(10) << p << date_at(panel, d.parent_t) << " .. "
            << date_at(panel, d.parent_t_prime) << '\n';
    }
}

void write_json(const std::filesystem::path& path, const OrderedJson& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace netcpd
