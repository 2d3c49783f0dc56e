#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace qrobust {

/// One regression example: a logistic-map sequence and its parameter r.
struct Sample {
    std::vector<double> sequence;
    double target = 0.0;

    bool operator==(const Sample &) const = default;
};

struct DatasetMetadata {
    double r_min = 3.5;
    double r_max = 4.0;
    std::size_t count = 0;
    double x1 = 0.5;
    std::size_t length = 12;

    bool operator==(const DatasetMetadata &) const = default;
};

struct Dataset {
    std::vector<Sample> samples;
    DatasetMetadata metadata;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] bool empty() const { return samples.empty(); }

    bool operator==(const Dataset &) const = default;
};

/// x_1 = x1, x_t = r x_{t-1} (1 - x_{t-1}). Throws DomainError if length < 1.
std::vector<double> logistic_sequence(double r, double x1, std::size_t length);

/// `count` targets equidistant on [r_min, r_max] (both endpoints included),
/// each paired with its logistic sequence. Throws DomainError if count < 2.
Dataset generate_dataset(std::size_t count, double r_min, double r_max, double x1,
                         std::size_t length);

/**
 * Uniformly random partition into `train_count` and the remainder, without
 * replacement. Both halves keep the original relative order of samples.
 * Throws DomainError unless 0 < train_count < size.
 */
std::pair<Dataset, Dataset> split(const Dataset &dataset, std::size_t train_count,
                                  std::uint64_t seed);

/// Adds independent U[-epsilon, epsilon] noise to every sequence entry.
/// Targets are untouched and nothing is clipped.
std::vector<Sample> perturb(std::span<const Sample> samples, double epsilon,
                            std::uint64_t seed);

struct BifurcationRow {
    double r = 0.0;
    std::size_t t = 1;  ///< 1-based iteration index
    double x = 0.0;
};

/// First `iterations` iterates for every r, starting at x1.
std::vector<BifurcationRow> bifurcation_table(std::span<const double> r_values,
                                              std::size_t iterations, double x1);

/// `count` equidistant points on [lo, hi] inclusive (count >= 2), or {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// CSV with header "x_1,...,x_l,r" and one row per sample.
void write_dataset_csv(std::ostream &out, const Dataset &dataset);
void save_dataset_csv(const std::filesystem::path &path, const Dataset &dataset);
/// Reads the format written above. Metadata is reconstructed from the rows.
Dataset read_dataset_csv(std::istream &in);
Dataset load_dataset_csv(const std::filesystem::path &path);

/// CSV with header "r,t,x_t".
void write_bifurcation_csv(std::ostream &out, std::span<const BifurcationRow> rows);

} // namespace qrobust
