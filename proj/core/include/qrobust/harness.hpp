#pragma once

#include "qrobust/dataset.hpp"
#include "qrobust/model.hpp"
#include "qrobust/training.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qrobust {

/// Everything shared by the runs of one study.
struct ExperimentContext {
    CircuitLayout layout;
    OutputScaling scaling;
    Dataset train;
    Dataset test;
    TrainingConfig training;  ///< base config; lambda, seed and mask vary per job
    std::size_t threads = 1;  ///< worker count for independent jobs; 0 = hardware
};

/// A model family in the studies: trainable encoding with a given lambda, or
/// the fixed-encoding model.
struct Variant {
    std::string name;
    double lambda = 0.0;
    bool encoding_trainable = true;
};

Variant trainable_variant(double lambda);
Variant fixed_encoding_variant();

/// 10 log-spaced noise levels on [0.001, 0.5].
std::vector<double> default_epsilon_grid();

struct RobustnessConfig {
    std::vector<double> epsilon_grid = default_epsilon_grid();
    std::size_t perturbation_rounds = 100;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    std::vector<double> lambda_values = {0.0, 0.004, 0.03};
    bool include_fixed_encoding = true;
    /// Master seed of the perturbation draws. Every model sees the same noise
    /// at a given epsilon.
    std::uint64_t noise_seed = 20250101;

    void validate() const;
    [[nodiscard]] std::vector<Variant> variants() const;
};

struct SweepConfig {
    std::vector<double> lambda_grid = {0.0, 0.001, 0.002, 0.004, 0.008, 0.016, 0.03};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

    void validate() const;
};

/// Runs `job(i)` for i in [0, count) on up to `threads` workers. Jobs must
/// write only to their own output slot.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &job);

/**
 * Max over `rounds` perturbed copies of the test set of the clean-target MSE.
 * Round k uses perturb(test, epsilon, derive_seed(seed, k)), so the draws for
 * `rounds` = n are a prefix of those for any larger n.
 */
double worst_case_mse(const CircuitLayout &layout, const ModelParams &params,
                      const OutputScaling &scaling, std::span<const Sample> test_set,
                      double epsilon, std::size_t rounds, std::uint64_t seed);

/// Trained model of one (variant, seed) job.
struct TrainedModel {
    Variant variant;
    std::uint64_t seed = 0;
    RunRecord record;
};

/// Trains every (variant, seed) pair; output order is variant-major.
std::vector<TrainedModel> train_models(const ExperimentContext &context,
                                       std::span<const Variant> variants,
                                       std::span<const std::uint64_t> seeds);

struct RobustnessSeedRow {
    std::string variant;
    double lambda = 0.0;
    bool encoding_trainable = true;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    double worst_case_mse = 0.0;
    double lipschitz_bound = 0.0;
};

struct RobustnessRow {
    std::string variant;
    double lambda = 0.0;
    bool encoding_trainable = true;
    double epsilon = 0.0;
    double mean_worst_case_mse = 0.0;
    double std_worst_case_mse = 0.0;
    double mean_lipschitz_bound = 0.0;
    double std_lipschitz_bound = 0.0;
    std::size_t num_seeds = 0;
};

struct RobustnessResult {
    std::vector<RobustnessRow> rows;           ///< variant-major, epsilon ascending
    std::vector<RobustnessSeedRow> per_seed;   ///< variant, seed, epsilon
    std::vector<TrainedModel> models;
};

RobustnessResult run_robustness_study(const RobustnessConfig &config,
                                      const ExperimentContext &context);

struct SweepSeedRow {
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double gap = 0.0;
    double lipschitz_bound = 0.0;
};

struct SweepRow {
    double lambda = 0.0;
    std::size_t num_seeds = 0;
    double mean_train_mse = 0.0;
    double std_train_mse = 0.0;
    double mean_test_mse = 0.0;
    double std_test_mse = 0.0;
    double mean_gap = 0.0;
    double std_gap = 0.0;
    double mean_lipschitz_bound = 0.0;
    double std_lipschitz_bound = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;          ///< lambda in grid order
    std::vector<SweepSeedRow> per_seed;  ///< lambda, seed
    std::vector<TrainedModel> models;
};

SweepResult run_generalization_sweep(const SweepConfig &config,
                                     const ExperimentContext &context);

struct PredictionRow {
    std::string split;  ///< "train" or "test"
    double r_true = 0.0;
    double r_predicted = 0.0;
};

std::vector<PredictionRow> export_predictions(const CircuitLayout &layout,
                                              const ModelParams &params,
                                              const OutputScaling &scaling,
                                              const Dataset &train_set, const Dataset &test_set);

/// Index of the model with the median test MSE (lower median for even counts).
std::size_t median_test_mse_index(std::span<const TrainedModel> models);

/// Arithmetic mean and population standard deviation.
struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};
MeanStd mean_std(std::span<const double> values);

std::string robustness_csv(const RobustnessResult &result);
std::string robustness_seed_csv(const RobustnessResult &result);
std::string sweep_csv(const SweepResult &result);
std::string sweep_seed_csv(const SweepResult &result);
std::string predictions_csv(std::span<const PredictionRow> rows);

} // namespace qrobust
