#include "netcpd/adjacency_io.hpp"
#include "netcpd/network.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

using namespace netcpd;
using test_support::random_normal;

namespace {

ReturnsPanel panel_from(const Eigen::MatrixXd& m) {
    ReturnsPanel p;
    for (Index i = 0; i < m.rows(); ++i) p.tickers.push_back("N" + std::to_string(i));
    for (Index j = 0; j < m.cols(); ++j) p.dates.push_back(nth_weekday_from(parse_iso_date("2001-01-01"), j));
    p.returns = m;
    return p;
}

std::vector<NetworkConfig> all_families() {
    NetworkConfig g;
    NetworkConfig c;
    c.family = NetworkFamily::correlation;
    NetworkConfig pc;
    pc.family = NetworkFamily::partial_correlation;
    NetworkConfig e;
    e.family = NetworkFamily::epsilon_neighborhood;
    e.epsilon = 1.4;
    return {g, c, pc, e};
}

}  // namespace

TEST(WindowSlice, Ranges) {
    const auto p = panel_from(random_normal(3, 12, 1));
    EXPECT_EQ(Eigen::MatrixXd(window_slice(p, 0, 11)), p.returns);
    EXPECT_EQ(window_slice(p, 5, 5).cols(), 1);
    const Window w = window_slice(p, 3, 7);
    EXPECT_EQ(w.cols(), 5);
    EXPECT_EQ(Eigen::MatrixXd(w), p.returns.middleCols(3, 5));
    EXPECT_EQ(w.data(), p.returns.col(3).data());  // a view, not a copy
    EXPECT_THROW(window_slice(p, -1, 3), std::out_of_range);
    EXPECT_THROW(window_slice(p, 4, 3), std::out_of_range);
    EXPECT_THROW(window_slice(p, 0, 12), std::out_of_range);
}

TEST(MedianHeuristic, KnownValues) {
    Eigen::MatrixXd two(2, 6);
    two.row(0) = random_normal(1, 6, 2);
    two.row(1) = two.row(0).array() + 1.0;
    EXPECT_NEAR(median_heuristic_sigma2(two), 1.0, 1e-15);

    const Eigen::MatrixXd same = Eigen::MatrixXd::Ones(3, 5) * 0.3;
    EXPECT_THROW(median_heuristic_sigma2(same), DegenerateError);
    EXPECT_THROW(median_heuristic_sigma2(Eigen::MatrixXd::Ones(1, 5)), std::invalid_argument);
}

TEST(MedianHeuristic, MatchesPairEnumeration) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd w = random_normal(5, 20, 40 + seed);
        EXPECT_NEAR(median_heuristic_sigma2(w), oracle::median_sq_distance(oracle::to_rows(w)), 1e-14);
    }
}

TEST(GaussianKernel, KnownValues) {
    Eigen::MatrixXd same(2, 4);
    same << 1, 2, 3, 4, 1, 2, 3, 4;
    EXPECT_EQ(gaussian_kernel_adjacency(same, 0.7).weights(0, 1), 1.0);

    Eigen::MatrixXd shifted(2, 4);
    shifted << 0, 1, 2, 3, 1, 2, 3, 4;
    EXPECT_NEAR(gaussian_kernel_adjacency(shifted, 0.5).weights(0, 1), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(gaussian_kernel_adjacency(shifted, 0.5).weights(0, 1), 0.3679, 5e-5);
}

TEST(GaussianKernel, MatchesDoubleLoopOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd w = random_normal(4, 10, 70 + seed);
        const double s2 = median_heuristic_sigma2(w);
        const auto adj = gaussian_kernel_adjacency(w, s2);
        EXPECT_LE(oracle::max_abs_diff(adj.weights, oracle::gaussian_kernel(oracle::to_rows(w), s2)), 1e-12);
    }
}

TEST(GaussianKernel, Errors) {
    Eigen::MatrixXd w = random_normal(3, 5, 3);
    EXPECT_THROW(gaussian_kernel_adjacency(w, 0.0), std::invalid_argument);
    w(1, 2) = std::nan("");
    EXPECT_THROW(gaussian_kernel_adjacency(w, 1.0), std::invalid_argument);
}

TEST(GaussianKernel, WeightsDecreaseWithDistance) {
    Eigen::MatrixXd w(5, 8);
    const Eigen::RowVectorXd base = random_normal(1, 8, 9);
    for (Index i = 0; i < 5; ++i) w.row(i) = base.array() + 0.4 * static_cast<double>(i);
    const auto adj = gaussian_kernel_adjacency(w, 0.8);
    for (Index j = 2; j < 5; ++j) EXPECT_LT(adj.weights(0, j), adj.weights(0, j - 1));
}

TEST(GaussianKernel, ShiftInvariantButNotScaleInvariant) {
    const Eigen::MatrixXd w = random_normal(4, 15, 12);
    const auto base = gaussian_kernel_adjacency(w, 1.3);
    const Eigen::MatrixXd shifted = (w.array() + 2.5).matrix();
    EXPECT_LE((gaussian_kernel_adjacency(shifted, 1.3).weights - base.weights).cwiseAbs().maxCoeff(), 1e-12);

    Eigen::MatrixXd scaled = w;
    scaled.row(0) *= 3.0;
    EXPECT_GT((gaussian_kernel_adjacency(scaled, 1.3).weights - base.weights).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Correlation, PerfectDependence) {
    const Eigen::RowVectorXd y = random_normal(1, 12, 4);
    Eigen::MatrixXd affine(2, 12);
    affine.row(0) = y;
    affine.row(1) = 2.0 * y.array() + 3.0;
    EXPECT_NEAR(correlation_adjacency(affine).weights(0, 1), 1.0, 1e-15);

    Eigen::MatrixXd negated(2, 12);
    negated.row(0) = y;
    negated.row(1) = -y;
    EXPECT_NEAR(correlation_adjacency(negated).weights(0, 1), 1.0, 1e-15);
}

TEST(Correlation, MatchesTextbookPearson) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd w = random_normal(4, 30, 90 + seed);
        EXPECT_LE(oracle::max_abs_diff(correlation_adjacency(w).weights, oracle::abs_correlation(oracle::to_rows(w))),
                  1e-12);
    }
}

TEST(Correlation, ConstantRowNamesEntity) {
    Eigen::MatrixXd w = random_normal(3, 10, 5);
    w.row(2).setConstant(4.0);
    const std::vector<std::string> labels{"SPX", "FTSE", "NIKKEI"};
    try {
        correlation_adjacency(w, labels);
        FAIL() << "expected DegenerateError";
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("NIKKEI"), std::string::npos) << e.what();
    }
    EXPECT_THROW(correlation_adjacency(random_normal(3, 1, 1)), std::invalid_argument);
}

TEST(Correlation, InvariantUnderPerRowAffineMaps) {
    const Eigen::MatrixXd w = random_normal(5, 25, 13);
    Eigen::MatrixXd mapped = w;
    const double a[] = {0.5, 3.0, 1e3, 2.0, 7.5};
    const double b[] = {-1.0, 100.0, 0.25, 0.0, -42.0};
    for (Index i = 0; i < 5; ++i) mapped.row(i) = a[i] * w.row(i).array() + b[i];
    EXPECT_LE((correlation_adjacency(mapped).weights - correlation_adjacency(w).weights).cwiseAbs().maxCoeff(),
              1e-12);
    mapped.row(1) *= -1.0;  // negative slopes keep |r|
    EXPECT_LE((correlation_adjacency(mapped).weights - correlation_adjacency(w).weights).cwiseAbs().maxCoeff(),
              1e-12);
}

TEST(PartialCorrelation, TwoNodesEqualsCorrelation) {
    const Eigen::MatrixXd w = random_normal(2, 40, 14);
    EXPECT_NEAR(partial_correlation_adjacency(w, 0.0).weights(0, 1), correlation_adjacency(w).weights(0, 1), 1e-12);
}

TEST(PartialCorrelation, ConditioningRemovesCommonFactor) {
    // x1 and x2 share the driver x3; given x3 they are independent.
    const Eigen::MatrixXd z = random_normal(3, 400, 15);
    Eigen::MatrixXd w(3, 400);
    w.row(2) = z.row(0);
    w.row(0) = z.row(0) + 0.3 * z.row(1);
    w.row(1) = z.row(0) + 0.3 * z.row(2);
    const auto rows = oracle::to_rows(w);
    const double r12 = std::abs(oracle::pearson(rows[0], rows[1]));
    const double partial = partial_correlation_adjacency(w, 0.0).weights(0, 1);
    EXPECT_GT(r12, 0.8);
    EXPECT_LT(partial, 0.2);
    EXPECT_NEAR(partial, oracle::abs_partial_correlation(rows)[0][1], 1e-10);
}

TEST(PartialCorrelation, ColliderMatchesResidualOracle) {
    // x3 = x1 + x2 + noise with x1, x2 independent: conditioning on x3 induces
    // strong (negative) dependence, so |rho_12.3| is far above |r_12|.
    const Eigen::MatrixXd z = random_normal(3, 300, 16);
    Eigen::MatrixXd w(3, 300);
    w.row(0) = z.row(0);
    w.row(1) = z.row(1);
    w.row(2) = z.row(0) + z.row(1) + 0.05 * z.row(2);
    const auto rows = oracle::to_rows(w);
    const double partial = partial_correlation_adjacency(w, 0.0).weights(0, 1);
    EXPECT_LT(std::abs(oracle::pearson(rows[0], rows[1])), 0.2);
    EXPECT_GT(partial, 0.9);
    EXPECT_NEAR(partial, oracle::abs_partial_correlation(rows)[0][1], 1e-8);
}

TEST(PartialCorrelation, MatchesResidualOracleWithRidge) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd w = random_normal(5, 100, 200 + seed);
        EXPECT_LE(oracle::max_abs_diff(partial_correlation_adjacency(w, 1e-4).weights,
                                       oracle::abs_partial_correlation(oracle::to_rows(w))),
                  1e-3);
    }
}

TEST(PartialCorrelation, SingularSuggestsRidge) {
    Eigen::MatrixXd w = random_normal(3, 30, 17);
    w.row(2) = w.row(0) + w.row(1);
    try {
        partial_correlation_adjacency(w, 0.0);
        FAIL() << "expected DegenerateError";
    } catch (const DegenerateError& e) {
        EXPECT_NE(std::string(e.what()).find("ridge"), std::string::npos);
    }
    EXPECT_NO_THROW(partial_correlation_adjacency(w, 1e-2));
}

TEST(Epsilon, KnownValues) {
    Eigen::MatrixXd same(2, 3);
    same << 1, 2, 3, 1, 2, 3;
    EXPECT_EQ(epsilon_adjacency(same, 1e-9).weights(0, 1), 1.0);

    const Eigen::MatrixXd w = random_normal(4, 10, 18);
    const auto rows = oracle::to_rows(w);
    double min_dist = 1e300;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            min_dist = std::min(min_dist, std::sqrt(oracle::sq_dist_over_len(rows[i], rows[j])));
        }
    }
    EXPECT_EQ(epsilon_adjacency(w, 0.99 * min_dist).weights, Eigen::MatrixXd::Zero(4, 4));
    EXPECT_THROW(epsilon_adjacency(w, 0.0), std::invalid_argument);
}

TEST(Epsilon, MatchesThresholdingOracle) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Eigen::MatrixXd w = random_normal(4, 10, 300 + seed);
        const auto rows = oracle::to_rows(w);
        const double eps = std::sqrt(oracle::median_sq_distance(rows));
        EXPECT_EQ(oracle::max_abs_diff(epsilon_adjacency(w, eps).weights, oracle::epsilon_graph(rows, eps)), 0.0);
    }
}

TEST(AdjacencyInvariants, SymmetricZeroDiagonalAndInRange) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Eigen::MatrixXd w = random_normal(3 + static_cast<Index>(seed % 4), 10 + static_cast<Index>(seed), seed);
        for (const auto& cfg : all_families()) {
            const auto adj = build_adjacency(w, cfg, resolve_sigma2(w, cfg));
            EXPECT_EQ(adj.weights, adj.weights.transpose().eval());
            EXPECT_EQ(adj.weights.diagonal().cwiseAbs().maxCoeff(), 0.0);
            for (Index i = 0; i < adj.n(); ++i) {
                for (Index j = 0; j < adj.n(); ++j) {
                    if (i == j) continue;
                    const double v = adj.weights(i, j);
                    switch (cfg.family) {
                        case NetworkFamily::gaussian_kernel: EXPECT_TRUE(v > 0.0 && v <= 1.0); break;
                        case NetworkFamily::epsilon_neighborhood: EXPECT_TRUE(v == 0.0 || v == 1.0); break;
                        default: EXPECT_TRUE(v >= 0.0 && v <= 1.0); break;
                    }
                }
            }
        }
    }
}

TEST(AdjacencyInvariants, NodePermutationEquivariance) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd w = random_normal(6, 30, 500 + static_cast<std::uint64_t>(trial));
        std::vector<Index> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        Eigen::MatrixXd permuted(6, 30);
        for (Index i = 0; i < 6; ++i) permuted.row(perm[static_cast<std::size_t>(i)]) = w.row(i);
        for (const auto& cfg : all_families()) {
            const auto a = build_adjacency(w, cfg, resolve_sigma2(w, cfg));
            const auto b = build_adjacency(permuted, cfg, resolve_sigma2(permuted, cfg));
            for (Index i = 0; i < 6; ++i) {
                for (Index j = 0; j < 6; ++j) {
                    EXPECT_NEAR(b.weights(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]),
                                a.weights(i, j), 1e-12);
                }
            }
        }
    }
}

TEST(SubwindowNetworks, AgreesWithDirectConstructors) {
    const Eigen::MatrixXd interval = random_normal(6, 60, 21);
    for (const auto& cfg : all_families()) {
        const double s2 = resolve_sigma2(interval, cfg);
        const SubwindowNetworks nets(interval, cfg, s2);
        const std::pair<Index, Index> ranges[] = {{0, 59}, {0, 20}, {21, 59}, {10, 12}, {30, 45}};
        for (const auto& [a, b] : ranges) {
            const auto fast = nets.compute(a, b);
            const auto direct = build_adjacency(interval.middleCols(a, b - a + 1), cfg, s2);
            EXPECT_LE((fast.weights - direct.weights).cwiseAbs().maxCoeff(), 1e-10)
                << to_string(cfg.family) << " [" << a << "," << b << "]";
        }
    }
}

TEST(SubwindowNetworks, ConstantSubwindowIsReported) {
    Eigen::MatrixXd interval = random_normal(3, 30, 22);
    interval.block(1, 0, 1, 10).setConstant(2.0);
    NetworkConfig cfg;
    cfg.family = NetworkFamily::correlation;
    const std::vector<std::string> labels{"A", "B", "C"};
    const SubwindowNetworks nets(interval, cfg, 0.0, labels);
    EXPECT_THROW(nets.compute(0, 9), DegenerateError);
    EXPECT_NO_THROW(nets.compute(0, 15));
}

TEST(NetworkConfig, Validation) {
    NetworkConfig c;
    EXPECT_NO_THROW(c.validate());
    c.sigma2 = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.family = NetworkFamily::epsilon_neighborhood;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.epsilon = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.ridge = -1e-3;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(parse_network_family("partial"), NetworkFamily::partial_correlation);
    EXPECT_EQ(parse_network_family("gaussian-kernel"), NetworkFamily::gaussian_kernel);
    EXPECT_THROW(parse_network_family("laplacian"), std::invalid_argument);
}

TEST(AdjacencyExport, CsvAndJsonRoundTrip) {
    const auto dir = test_support::scratch_dir("adjacency_io");
    const Eigen::MatrixXd w = random_normal(5, 40, 23);
    const auto adj = gaussian_kernel_adjacency(w, median_heuristic_sigma2(w));
    const std::vector<std::string> tickers{"A", "B", "C", "D", "E"};

    write_adjacency_csv(dir / "adj.csv", adj, tickers);
    const auto back = read_adjacency_csv(dir / "adj.csv");
    EXPECT_EQ(back.tickers, tickers);
    EXPECT_LE((back.adjacency.weights - adj.weights).cwiseAbs().maxCoeff(), 1e-15);

    const auto doc = adjacency_to_json(adj, tickers);
    EXPECT_EQ(doc.at("edges").size(), 10u);
    const auto parsed = adjacency_from_json(nlohmann::json::parse(doc.dump()));
    EXPECT_LE((parsed.adjacency.weights - adj.weights).cwiseAbs().maxCoeff(), 1e-15);
}
