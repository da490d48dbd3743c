#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace carbonsched::test {

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("carbonsched_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Integer intensities and dyadic energies keep every sum exact in double
// precision, so "equal" comparisons below mean bit-for-bit equal.
inline std::vector<double> random_intensities(std::mt19937_64& rng, std::size_t n, int max_value = 1000)
{
    std::uniform_int_distribution<int> pick(0, max_value);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = pick(rng);
    }
    return v;
}

inline std::vector<double> distinct_intensities(std::mt19937_64& rng, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<double>(10 * i + 5);
    }
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

inline std::vector<double> uniform_profile(std::mt19937_64& rng, std::size_t n)
{
    static constexpr double kLevels[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kLevels) - 1);
    return std::vector<double>(n, kLevels[pick(rng)]);
}

inline std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

struct StartChoice {
    std::size_t start = 0;
    double grams = 0.0;
};

// Flexible Start by direct re-enumeration of every candidate start.
inline StartChoice enumerate_starts(std::span<const double> profile, std::span<const double> intensities,
                                    std::size_t start, std::size_t slack)
{
    StartChoice best{start, -1.0};
    for (std::size_t s = start; s <= start + slack && s + profile.size() <= intensities.size(); ++s) {
        double grams = 0.0;
        for (std::size_t j = 0; j < profile.size(); ++j) {
            grams += profile[j] * intensities[s + j];
        }
        if (best.grams < 0.0 || grams < best.grams) {
            best = {s, grams};
        }
    }
    return best;
}

} // namespace carbonsched::test
