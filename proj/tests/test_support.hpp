#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace netcpd::test_support {

inline std::filesystem::path scratch_dir(const std::string& name) {
    const char* env = std::getenv("NETCPD_TEST_TMP");
    std::filesystem::path root = env ? env : std::filesystem::temp_directory_path() / "netcpd_tests";
    auto dir = root / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Eigen::MatrixXd random_normal(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
    }
    return m;
}

}  // namespace netcpd::test_support
