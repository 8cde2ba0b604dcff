#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "iktsne/data_matrix.hpp"

namespace testutil {

// Fresh scratch directory per test binary run.
inline std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("iktsne_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto path = scratch_dir() / name;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline iktsne::DataMatrix random_dense(std::size_t n, std::size_t d, std::uint64_t seed,
                                       double scale = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<double> values(n * d);
    for (auto& v : values) {
        v = u(eng);
    }
    return iktsne::DataMatrix::dense(d, std::move(values));
}

inline std::vector<double> random_coords(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> coords(2 * n);
    for (auto& c : coords) {
        c = u(eng);
    }
    return coords;
}

}  // namespace testutil
