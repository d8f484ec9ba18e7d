#include "netcpd/cli.hpp"

#include "netcpd/adjacency_io.hpp"
#include "netcpd/ingest.hpp"
#include "netcpd/report.hpp"
#include "netcpd/synth.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>

namespace netcpd::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string input;
    std::string out_dir = "netcpd_out";
    Index window = 200;
    Index delta = 50;
    Index boot = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 42;
    std::string kernel = "gaussian";
    std::string sigma = "median";
    std::optional<double> epsilon;
    double ridge = 1e-4;
    std::string bootstrap = "iid";
    std::optional<Index> stride;
    unsigned threads = 0;
    Index sieve_order = 5;
    double dw_lower = 1.7;
    double dw_upper = 2.3;
    bool bonferroni = false;
    double max_missing = 0.2;
    std::string from;
    std::string to;

    // simulate
    Index sim_n = 13;
    std::vector<Index> sim_lengths{100, 100};
    std::vector<double> sim_rho{0.0, 0.7};
    std::vector<Index> sim_blocks{6, 7};
};

ScanConfig scan_config(const Options& o) {
    ScanConfig config;
    config.delta = o.delta;
    config.boot = o.boot;
    config.alpha = o.alpha;
    config.seed = o.seed;
    config.bootstrap = parse_bootstrap_mode(o.bootstrap);
    config.network.family = parse_network_family(o.kernel);
    if (o.sigma != "median") {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(o.sigma.data(), o.sigma.data() + o.sigma.size(), v);
        if (ec != std::errc{} || ptr != o.sigma.data() + o.sigma.size()) {
            throw std::invalid_argument("--sigma expects 'median' or a positive number, got '" + o.sigma + "'");
        }
        config.network.sigma2 = v;
    }
    config.network.epsilon = o.epsilon;
    config.network.ridge = o.ridge;
    config.threads = o.threads;
    config.sieve_max_order = o.sieve_order;
    config.dw_band = DwBand{o.dw_lower, o.dw_upper};
    config.bonferroni = o.bonferroni;
    config.validate();
    return config;
}

ReturnsPanel load_returns(const Options& o) {
    if (o.input.empty()) throw std::invalid_argument("--input is required");
    FillPolicy policy;
    policy.max_missing_fraction = o.max_missing;
    return compute_returns(align_and_fill(load_prices(o.input), policy));
}

// Return-index range selected by --from/--to (inclusive, defaults to the whole panel).
std::pair<Index, Index> date_range(const ReturnsPanel& panel, const Options& o) {
    Index first = 0;
    Index last = panel.length() - 1;
    if (!o.from.empty()) {
        const Date d = parse_iso_date(o.from);
        first = std::lower_bound(panel.dates.begin(), panel.dates.end(), d) - panel.dates.begin();
    }
    if (!o.to.empty()) {
        const Date d = parse_iso_date(o.to);
        last = (std::upper_bound(panel.dates.begin(), panel.dates.end(), d) - panel.dates.begin()) - 1;
    }
    if (first > last || first >= panel.length() || last < 0) {
        throw std::invalid_argument("date range selects no returns");
    }
    return {first, last};
}

fs::path prepare_out_dir(const Options& o) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    return dir;
}

void write_ztraces(const fs::path& dir, const ChangePointReport& report, const ReturnsPanel& panel) {
    char name[64];
    for (std::size_t w = 0; w < report.scanned.size(); ++w) {
        const auto& scan = report.scanned[w];
        std::snprintf(name, sizeof(name), "ztrace_%03zu_%s.csv", w,
                      format_iso_date(panel.dates[static_cast<std::size_t>(scan.t)]).c_str());
        write_ztrace_csv(dir / name, scan, panel);
    }
}

int run_scan(const Options& o, std::ostream& out) {
    const ScanConfig config = scan_config(o);
    const ReturnsPanel panel = load_returns(o);
    const ChangePointReport report = sliding_scan(panel, o.window, o.stride.value_or(o.window), config);

    const fs::path dir = prepare_out_dir(o);
    write_json(dir / "report.json", report_to_json(report, panel));
    write_ztraces(dir, report, panel);
    print_detections(out, report, panel);
    return 0;
}

int run_segment(const Options& o, std::ostream& out) {
    const ScanConfig config = scan_config(o);
    const ReturnsPanel panel = load_returns(o);
    const auto [first, last] = date_range(panel, o);
    const ChangePointReport report = segment_recursive(panel, first, last, config);

    const fs::path dir = prepare_out_dir(o);
    write_json(dir / "report.json", report_to_json(report, panel));
    write_ztraces(dir, report, panel);
    print_detections(out, report, panel);
    return 0;
}

std::string cell(const WindowScan& scan, const ReturnsPanel& panel) {
    char p[16];
    std::snprintf(p, sizeof(p), "%.3f", scan.p_value);
    std::string text = p;
    text += scan.change_point ? "  " + format_iso_date(panel.dates[static_cast<std::size_t>(*scan.change_point)])
                              : std::string("  -");
    return text;
}

int run_compare(const Options& o, std::ostream& out) {
    ScanConfig kernel_config = scan_config(o);
    kernel_config.network.family = NetworkFamily::gaussian_kernel;
    ScanConfig corr_config = kernel_config;
    corr_config.network.family = NetworkFamily::correlation;
    const ReturnsPanel panel = load_returns(o);
    const Index stride = o.stride.value_or(o.window);
    const ChangePointReport kernel = sliding_scan(panel, o.window, stride, kernel_config);
    const ChangePointReport corr = sliding_scan(panel, o.window, stride, corr_config);

    OrderedJson doc;
    doc["gaussian-kernel"] = report_to_json(kernel, panel);
    doc["correlation"] = report_to_json(corr, panel);
    const fs::path dir = prepare_out_dir(o);
    write_json(dir / "compare.json", doc);

    out << std::left << std::setw(26) << "Window" << std::setw(24) << "gaussian-kernel (p, date)"
        << "correlation (p, date)\n";
    for (std::size_t w = 0; w < kernel.scanned.size(); ++w) {
        const auto& ks = kernel.scanned[w];
        const std::string span = format_iso_date(panel.dates[static_cast<std::size_t>(ks.t)]) + " .. " +
                                 format_iso_date(panel.dates[static_cast<std::size_t>(ks.t_prime)]);
        out << std::setw(26) << span << std::setw(24) << cell(ks, panel) << cell(corr.scanned[w], panel) << '\n';
    }
    return 0;
}

int run_adjacency(const Options& o, std::ostream& out) {
    const ScanConfig config = scan_config(o);
    const ReturnsPanel panel = load_returns(o);
    const auto [first, last] = date_range(panel, o);
    const Window window = window_slice(panel, first, last);
    const double sigma2 = resolve_sigma2(window, config.network);
    const Adjacency adj = build_adjacency(window, config.network, sigma2, panel.tickers);

    const fs::path dir = prepare_out_dir(o);
    write_adjacency_csv(dir / "adjacency.csv", adj, panel.tickers);
    nlohmann::json doc = adjacency_to_json(adj, panel.tickers);
    doc["family"] = to_string(config.network.family);
    doc["from"] = format_iso_date(panel.dates[static_cast<std::size_t>(first)]);
    doc["to"] = format_iso_date(panel.dates[static_cast<std::size_t>(last)]);
    if (config.network.family == NetworkFamily::gaussian_kernel) doc["sigma2"] = sigma2;
    std::ofstream(dir / "adjacency.json", std::ios::binary) << doc.dump(2) << '\n';
    out << "wrote " << adj.n() << "x" << adj.n() << " " << to_string(config.network.family) << " adjacency for "
        << doc["from"].get<std::string>() << " .. " << doc["to"].get<std::string>() << '\n';
    return 0;
}

int run_simulate(const Options& o, std::ostream& out) {
    if (o.sim_lengths.empty() || o.sim_lengths.size() != o.sim_rho.size()) {
        throw std::invalid_argument("--lengths and --rho must list one value per segment");
    }
    RegimeSpec spec;
    spec.seed = o.seed;
    for (std::size_t s = 0; s < o.sim_lengths.size(); ++s) {
        spec.segments.push_back({o.sim_lengths[s], block_covariance(o.sim_n, o.sim_blocks, o.sim_rho[s])});
    }
    const ReturnsPanel returns = generate_panel(spec, o.sim_n);
    const PricePanel levels = integrate_returns(returns);

    nlohmann::ordered_json truth;
    truth["n"] = o.sim_n;
    truth["length"] = returns.length();
    truth["seed"] = o.seed;
    truth["segments"] = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < o.sim_lengths.size(); ++s) {
        truth["segments"].push_back({{"length", o.sim_lengths[s]}, {"rho", o.sim_rho[s]}});
    }
    truth["blocks"] = o.sim_blocks;
    truth["change_points"] = nlohmann::ordered_json::array();
    for (Index k : spec.change_points()) {
        truth["change_points"].push_back(
            {{"k", k}, {"date", format_iso_date(returns.dates[static_cast<std::size_t>(k)])}});
    }

    const fs::path dir = prepare_out_dir(o);
    write_prices(dir / "panel.csv", levels);
    std::ofstream(dir / "truth.json", std::ios::binary) << truth.dump(2) << '\n';
    out << "wrote " << o.sim_n << " x " << returns.length() << " panel with " << spec.change_points().size()
        << " change point(s) to " << dir.string() << '\n';
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Change-point detection in similarity networks of multivariate time series", "netcpd"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; command-line flags override it");

    app.add_option("--input", o.input, "Panel CSV of levels (date,<ticker>,...)");
    app.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    app.add_option("--window", o.window, "Interval length t'-t of each scanned window")->capture_default_str();
    app.add_option("--delta", o.delta, "Margin excluded at both interval ends")->capture_default_str();
    app.add_option("--boot", o.boot, "Bootstrap replicates B")->capture_default_str();
    app.add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
    app.add_option("--seed", o.seed, "Master random seed")->capture_default_str();
    app.add_option("--kernel", o.kernel, "Network family")
        ->check(CLI::IsMember({"gaussian", "correlation", "partial", "epsilon"}))
        ->capture_default_str();
    app.add_option("--sigma", o.sigma, "Kernel bandwidth sigma^2: 'median' or a positive value")
        ->capture_default_str();
    app.add_option("--epsilon", o.epsilon, "Distance threshold for the epsilon family");
    app.add_option("--ridge", o.ridge, "Partial-correlation ridge")->capture_default_str();
    app.add_option("--bootstrap", o.bootstrap, "Resampling scheme")
        ->check(CLI::IsMember({"iid", "sieve", "auto"}))
        ->capture_default_str();
    app.add_option("--stride", o.stride, "Advance between windows (default: --window)");
    app.add_option("--threads", o.threads, "Worker threads, 0 = all cores; never changes results")
        ->capture_default_str();
    app.add_option("--sieve-order", o.sieve_order, "Largest AR order tried by the sieve bootstrap")
        ->capture_default_str();
    app.add_option("--dw-lower", o.dw_lower, "Lower Durbin-Watson bound for --bootstrap auto")->capture_default_str();
    app.add_option("--dw-upper", o.dw_upper, "Upper Durbin-Watson bound for --bootstrap auto")->capture_default_str();
    app.add_flag("--bonferroni", o.bonferroni, "Divide alpha across windows / recursion levels");
    app.add_option("--max-missing", o.max_missing, "Largest tolerated fraction of missing dates per entity")
        ->capture_default_str();
    app.add_option("--from", o.from, "First date (segment, adjacency)");
    app.add_option("--to", o.to, "Last date (segment, adjacency)");

    auto* scan = app.add_subcommand("scan", "Test consecutive windows of the panel");
    auto* segment = app.add_subcommand("segment", "Binary segmentation over the panel or --from/--to");
    auto* compare = app.add_subcommand("compare", "Scan with gaussian-kernel and correlation networks");
    auto* adjacency = app.add_subcommand("adjacency", "Export the adjacency matrix of one window");
    auto* simulate = app.add_subcommand("simulate", "Write a synthetic panel with planted change points");
    simulate->add_option("--n", o.sim_n, "Entities")->capture_default_str();
    simulate->add_option("--lengths", o.sim_lengths, "Segment lengths")->delimiter(',')->capture_default_str();
    simulate->add_option("--rho", o.sim_rho, "Within-block correlation per segment")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--blocks", o.sim_blocks, "Block sizes (sum to --n)")->delimiter(',')->capture_default_str();

    std::vector<std::string> argv_storage{"netcpd"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (scan->parsed()) return run_scan(o, out);
        if (segment->parsed()) return run_segment(o, out);
        if (compare->parsed()) return run_compare(o, out);
        if (adjacency->parsed()) return run_adjacency(o, out);
        if (simulate->parsed()) return run_simulate(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace netcpd::cli
