#pragma once

#include "qrobust/dataset.hpp"
#include "qrobust/gradients.hpp"
#include "qrobust/lipschitz.hpp"
#include "qrobust/model.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace qrobust {

struct TrainingConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 2000;
    double lambda = 0.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    /// 0 means full batch. Otherwise each epoch is one pass over shuffled
    /// mini-batches of this size.
    std::size_t batch_size = 0;
    std::uint64_t seed = 0;
    bool encoding_trainable = true;
    GradientMethod gradient_method = GradientMethod::Adjoint;
    /// Probe pairs and radius for the empirical Lipschitz estimate in the
    /// final report. 0 probes skips the estimate.
    std::size_t report_probe_count = 200;
    double report_probe_radius = 0.1;

    /// Throws DomainError on an invalid field.
    void validate() const;

    bool operator==(const TrainingConfig &) const = default;
};

/// Adam moments for the trainable slots only: weights (when the encoding is
/// trainable) followed by biases.
struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step_count = 0;

    static AdamState for_params(const ModelParams &params);
};

/// One bias-corrected Adam update of the trainable slots. Frozen weights are
/// left bit-identical. Throws ShapeError on size mismatches.
void adam_step(ModelParams &params, const GradientVector &grad, AdamState &state,
               const TrainingConfig &config);

/// Values at the parameters an epoch's update started from.
struct EpochTrace {
    std::size_t epoch = 0;
    double loss = 0.0;
    double regularizer = 0.0;
    double lipschitz_bound = 0.0;
};

struct FinalMetrics {
    double train_mse = 0.0;
    double test_mse = 0.0;
    GapReport gap;
    LipschitzReport lipschitz;
};

struct RunRecord {
    TrainingConfig config;
    std::vector<EpochTrace> trace;
    ModelParams initial_params;
    ModelParams final_params;
    FinalMetrics metrics;
};

/// Mean squared error of scaled predictions. No regularizer.
double evaluate_mse(const CircuitLayout &layout, const ModelParams &params,
                    const OutputScaling &scaling, std::span<const Sample> samples);

/// Initializes parameters from config.seed, runs config.epochs epochs of
/// Adam on the regularized loss and reports final train/test metrics.
RunRecord train(const CircuitLayout &layout, const Dataset &train_set, const Dataset &test_set,
                const OutputScaling &scaling, const TrainingConfig &config);

/// Deterministic JSON for a run: config, model checkpoint, metrics.
std::string run_record_to_json(const CircuitLayout &layout, const OutputScaling &scaling,
                               const RunRecord &record);

/// "epoch,loss,regularizer,lipschitz_bound" per epoch.
std::string trace_to_csv(const RunRecord &record);

} // namespace qrobust
