#pragma once

#include "qrobust/harness.hpp"
#include "qrobust/training.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace qrobust {

struct DataConfig {
    std::size_t count = 1000;
    double r_min = 3.5;
    double r_max = 4.0;
    double x1 = 0.5;
    std::size_t sequence_length = 12;
    std::size_t train_count = 200;
    std::uint64_t split_seed = 42;
};

struct ModelConfig {
    std::size_t num_qubits = 4;
    OutputScaling scaling;
};

struct BifurcationConfig {
    double r_min = 0.0;
    double r_max = 4.0;
    std::size_t r_count = 401;
    std::size_t iterations = 50;
    double x1 = 0.5;
};

/**
 * Complete study configuration. Serialized as one JSON document with the
 * sections "data", "model", "training", "robustness", "sweep",
 * "bifurcation" and the top-level key "threads". Every key is optional;
 * missing keys keep the base configuration's value. Unknown keys are errors.
 */
struct ExperimentConfig {
    DataConfig data;
    ModelConfig model;
    TrainingConfig training;
    RobustnessConfig robustness;
    SweepConfig sweep;
    BifurcationConfig bifurcation;
    std::size_t threads = 0;

    /// 500 samples split 100/400, 500 epochs, seeds 0..4.
    static ExperimentConfig desk_scale();
    /// 1000 samples split 200/800, 2000 epochs, seeds 0..49.
    static ExperimentConfig full_scale();

    void validate() const;
};

/// Applies the keys of `text` on top of `base`. Throws ConfigError naming the
/// offending dotted key.
ExperimentConfig config_from_json(std::string_view text,
                                  const ExperimentConfig &base = ExperimentConfig::desk_scale());
ExperimentConfig load_config(const std::filesystem::path &path,
                             const ExperimentConfig &base = ExperimentConfig::desk_scale());

/// Full document with every key, suitable for echoing into a run manifest.
std::string config_to_json(const ExperimentConfig &config);

/// Generates the dataset, splits it and builds the circuit.
ExperimentContext make_context(const ExperimentConfig &config);

} // namespace qrobust
