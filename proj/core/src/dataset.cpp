#include "qrobust/dataset.hpp"

#include "qrobust/csv.hpp"
#include "qrobust/errors.hpp"
#include "qrobust/rng.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace qrobust {

std::vector<double> logistic_sequence(double r, double x1, std::size_t length) {
    if (length < 1) {
        throw DomainError("logistic sequence length must be >= 1");
    }
    std::vector<double> out(length);
    out[0] = x1;
    for (std::size_t t = 1; t < length; ++t) {
        out[t] = r * out[t - 1] * (1.0 - out[t - 1]);
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        return {};
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(count);
    const double span = hi - lo;
    const auto denom = static_cast<double>(count - 1);
    for (std::size_t k = 0; k + 1 < count; ++k) {
        out[k] = lo + span * static_cast<double>(k) / denom;
    }
    out[count - 1] = hi;
    return out;
}

Dataset generate_dataset(std::size_t count, double r_min, double r_max, double x1,
                         std::size_t length) {
    if (count < 2) {
        throw DomainError("dataset count must be >= 2, got " + std::to_string(count));
    }
    if (length < 1) {
        throw DomainError("sequence length must be >= 1");
    }
    Dataset dataset;
    dataset.metadata = DatasetMetadata{r_min, r_max, count, x1, length};
    dataset.samples.reserve(count);
    for (const double r : linspace(r_min, r_max, count)) {
        dataset.samples.push_back(Sample{logistic_sequence(r, x1, length), r});
    }
    return dataset;
}

std::pair<Dataset, Dataset> split(const Dataset &dataset, std::size_t train_count,
                                  std::uint64_t seed) {
    const std::size_t total = dataset.size();
    if (train_count == 0 || train_count >= total) {
        throw DomainError("train_count must lie strictly between 0 and " +
                          std::to_string(total) + ", got " + std::to_string(train_count));
    }
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
    std::vector<std::size_t> test_idx(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    auto gather = [&](const std::vector<std::size_t> &idx) {
        Dataset part;
        part.metadata = dataset.metadata;
        part.metadata.count = idx.size();
        part.samples.reserve(idx.size());
        for (const auto i : idx) {
            part.samples.push_back(dataset.samples[i]);
        }
        return part;
    };
    return {gather(train_idx), gather(test_idx)};
}

std::vector<Sample> perturb(std::span<const Sample> samples, double epsilon,
                            std::uint64_t seed) {
    if (!(epsilon >= 0.0)) {
        throw DomainError("perturbation epsilon must be >= 0");
    }
    std::vector<Sample> out(samples.begin(), samples.end());
    if (epsilon == 0.0) {
        return out;
    }
    Rng rng(seed);
    for (auto &sample : out) {
        for (auto &value : sample.sequence) {
            value += rng.uniform(-epsilon, epsilon);
        }
    }
    return out;
}

std::vector<BifurcationRow> bifurcation_table(std::span<const double> r_values,
                                              std::size_t iterations, double x1) {
    if (iterations < 1) {
        throw DomainError("bifurcation iterations must be >= 1");
    }
    std::vector<BifurcationRow> rows;
    rows.reserve(r_values.size() * iterations);
    for (const double r : r_values) {
        const auto seq = logistic_sequence(r, x1, iterations);
        for (std::size_t t = 0; t < iterations; ++t) {
            rows.push_back(BifurcationRow{r, t + 1, seq[t]});
        }
    }
    return rows;
}

void write_dataset_csv(std::ostream &out, const Dataset &dataset) {
    const std::size_t length =
        dataset.empty() ? dataset.metadata.length : dataset.samples.front().sequence.size();
    for (std::size_t i = 0; i < length; ++i) {
        out << "x_" << (i + 1) << ',';
    }
    out << "r\n";
    for (const auto &sample : dataset.samples) {
        if (sample.sequence.size() != length) {
            throw ShapeError("dataset rows have inconsistent sequence lengths");
        }
        for (const double v : sample.sequence) {
            out << format_double(v) << ',';
        }
        out << format_double(sample.target) << '\n';
    }
}

void save_dataset_csv(const std::filesystem::path &path, const Dataset &dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_dataset_csv(out, dataset);
}

Dataset read_dataset_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("dataset CSV is empty");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "r") {
        throw ConfigError("dataset CSV header must be x_1,...,x_l,r");
    }
    for (std::size_t i = 0; i + 1 < header.size(); ++i) {
        if (header[i] != "x_" + std::to_string(i + 1)) {
            throw ConfigError("dataset CSV header column " + std::to_string(i + 1) +
                              " must be x_" + std::to_string(i + 1));
        }
    }
    const std::size_t length = header.size() - 1;

    Dataset dataset;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError("dataset CSV row " + std::to_string(row) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(header.size()));
        }
        Sample sample;
        sample.sequence.reserve(length);
        const std::string where = "dataset CSV row " + std::to_string(row);
        for (std::size_t i = 0; i < length; ++i) {
            sample.sequence.push_back(parse_double(fields[i], where));
        }
        sample.target = parse_double(fields.back(), where);
        dataset.samples.push_back(std::move(sample));
    }

    auto &meta = dataset.metadata;
    meta.count = dataset.size();
    meta.length = length;
    if (!dataset.empty()) {
        const auto [lo, hi] = std::minmax_element(
            dataset.samples.begin(), dataset.samples.end(),
            [](const Sample &a, const Sample &b) { return a.target < b.target; });
        meta.r_min = lo->target;
        meta.r_max = hi->target;
        meta.x1 = dataset.samples.front().sequence.front();
    }
    return dataset;
}

Dataset load_dataset_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return read_dataset_csv(in);
}

void write_bifurcation_csv(std::ostream &out, std::span<const BifurcationRow> rows) {
    out << "r,t,x_t\n";
    for (const auto &row : rows) {
        out << format_double(row.r) << ',' << row.t << ',' << format_double(row.x) << '\n';
    }
}

} // namespace qrobust
