#include "qrobust/training.hpp"

#include "json_detail.hpp"
#include "qrobust/csv.hpp"
#include "qrobust/errors.hpp"
#include "qrobust/rng.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace qrobust {

namespace {

// Sub-stream ids for seeds derived from config.seed.
constexpr std::uint64_t kBatchStream = 1;
constexpr std::uint64_t kProbeStream = 2;

} // namespace

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw DomainError("learning_rate must be > 0");
    }
    if (!(lambda >= 0.0)) {
        throw DomainError("lambda must be >= 0");
    }
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) {
        throw DomainError("adam_beta1 must lie in [0, 1)");
    }
    if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
        throw DomainError("adam_beta2 must lie in [0, 1)");
    }
    if (!(adam_epsilon > 0.0)) {
        throw DomainError("adam_epsilon must be > 0");
    }
    if (report_probe_count > 0 && !(report_probe_radius > 0.0)) {
        throw DomainError("report_probe_radius must be > 0");
    }
}

AdamState AdamState::for_params(const ModelParams &params) {
    const std::size_t n =
        params.biases.size() + (params.encoding_trainable ? params.weights.size() : 0);
    AdamState state;
    state.first_moment.assign(n, 0.0);
    state.second_moment.assign(n, 0.0);
    return state;
}

void adam_step(ModelParams &params, const GradientVector &grad, AdamState &state,
               const TrainingConfig &config) {
    if (grad.d_weights.size() != params.weights.size() ||
        grad.d_biases.size() != params.biases.size()) {
        throw ShapeError("gradient shape does not match parameters");
    }
    const std::size_t trainable_weights = params.encoding_trainable ? params.weights.size() : 0;
    if (state.first_moment.size() != trainable_weights + params.biases.size() ||
        state.second_moment.size() != state.first_moment.size()) {
        throw ShapeError("Adam state does not match the trainable parameter count");
    }

    ++state.step_count;
    const auto t = static_cast<double>(state.step_count);
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double correction1 = 1.0 - std::pow(b1, t);
    const double correction2 = 1.0 - std::pow(b2, t);

    auto update = [&](double &value, double g, std::size_t slot) {
        double &m = state.first_moment[slot];
        double &v = state.second_moment[slot];
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        const double m_hat = m / correction1;
        const double v_hat = v / correction2;
        value -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    };

    std::size_t slot = 0;
    for (std::size_t i = 0; i < trainable_weights; ++i) {
        update(params.weights[i], grad.d_weights[i], slot++);
    }
    for (std::size_t i = 0; i < params.biases.size(); ++i) {
        update(params.biases[i], grad.d_biases[i], slot++);
    }
}

double evaluate_mse(const CircuitLayout &layout, const ModelParams &params,
                    const OutputScaling &scaling, std::span<const Sample> samples) {
    if (samples.empty()) {
        throw DomainError("evaluate_mse needs a non-empty dataset");
    }
    double sum = 0.0;
    for (const auto &sample : samples) {
        const double residual = predict(layout, params, scaling, sample.sequence) - sample.target;
        sum += residual * residual;
    }
    return sum / static_cast<double>(samples.size());
}

RunRecord train(const CircuitLayout &layout, const Dataset &train_set, const Dataset &test_set,
                const OutputScaling &scaling, const TrainingConfig &config) {
    config.validate();
    scaling.validate();
    if (train_set.empty()) {
        throw DomainError("training set is empty");
    }
    if (test_set.empty()) {
        throw DomainError("test set is empty");
    }

    RunRecord record;
    record.config = config;
    record.initial_params = init_params(layout, config.seed, config.encoding_trainable);
    ModelParams params = record.initial_params;
    AdamState adam = AdamState::for_params(params);
    record.trace.reserve(config.epochs);

    const std::span<const Sample> samples(train_set.samples);
    const std::size_t n = samples.size();
    const bool full_batch = config.batch_size == 0 || config.batch_size >= n;

    Rng batch_rng(derive_seed(config.seed, kBatchStream));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Sample> batch;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        EpochTrace entry;
        entry.epoch = epoch + 1;
        entry.lipschitz_bound = lipschitz_bound(layout, params);
        entry.regularizer = regularizer(layout, params, config.lambda);
        if (full_batch) {
            const auto result = grad_loss(layout, params, scaling, samples, config.lambda,
                                          config.gradient_method);
            entry.loss = result.loss;
            adam_step(params, result.grad, adam, config);
        } else {
            batch_rng.shuffle(std::span<std::size_t>(order));
            double loss_sum = 0.0;
            std::size_t batches = 0;
            for (std::size_t start = 0; start < n; start += config.batch_size) {
                const std::size_t stop = std::min(n, start + config.batch_size);
                batch.clear();
                for (std::size_t i = start; i < stop; ++i) {
                    batch.push_back(samples[order[i]]);
                }
                const auto result = grad_loss(layout, params, scaling, batch, config.lambda,
                                              config.gradient_method);
                loss_sum += result.loss;
                ++batches;
                adam_step(params, result.grad, adam, config);
            }
            entry.loss = loss_sum / static_cast<double>(batches);
        }
        record.trace.push_back(entry);
    }

    record.final_params = std::move(params);
    auto &metrics = record.metrics;
    metrics.train_mse = evaluate_mse(layout, record.final_params, scaling, train_set.samples);
    metrics.test_mse = evaluate_mse(layout, record.final_params, scaling, test_set.samples);
    metrics.gap = generalization_gap(metrics.train_mse, metrics.test_mse);
    metrics.lipschitz =
        lipschitz_report(layout, record.final_params, scaling, config.report_probe_count,
                         config.report_probe_radius, derive_seed(config.seed, kProbeStream));
    return record;
}

std::string run_record_to_json(const CircuitLayout &layout, const OutputScaling &scaling,
                               const RunRecord &record) {
    using detail::Json;
    const auto &c = record.config;
    Json doc;
    doc["config"] = {{"learning_rate", c.learning_rate},
                     {"epochs", c.epochs},
                     {"lambda", c.lambda},
                     {"adam_beta1", c.adam_beta1},
                     {"adam_beta2", c.adam_beta2},
                     {"adam_epsilon", c.adam_epsilon},
                     {"batch_size", c.batch_size},
                     {"seed", c.seed},
                     {"encoding_trainable", c.encoding_trainable},
                     {"gradient_method", std::string(to_string(c.gradient_method))},
                     {"report_probe_count", c.report_probe_count},
                     {"report_probe_radius", c.report_probe_radius}};
    doc["output_scaling"] = {{"offset", scaling.offset}, {"slope", scaling.slope}};
    doc["initial_params"] = {{"weights", record.initial_params.weights},
                             {"biases", record.initial_params.biases}};
    doc["model"] = detail::checkpoint_json(layout, record.final_params);

    const auto &m = record.metrics;
    doc["metrics"] = {
        {"train_mse", m.train_mse},
        {"test_mse", m.test_mse},
        {"gap", m.gap.gap},
        {"lipschitz",
         {{"bound_raw", m.lipschitz.bound_raw},
          {"bound_scaled", m.lipschitz.bound_scaled},
          {"empirical_estimate", m.lipschitz.empirical_estimate},
          {"num_probe_pairs", m.lipschitz.num_probe_pairs}}}};
    doc["trace_epochs"] = record.trace.size();
    if (!record.trace.empty()) {
        doc["final_trace_loss"] = record.trace.back().loss;
    }
    return doc.dump(2);
}

std::string trace_to_csv(const RunRecord &record) {
    std::ostringstream out;
    out << "epoch,loss,regularizer,lipschitz_bound\n";
    for (const auto &e : record.trace) {
        out << e.epoch << ',' << format_double(e.loss) << ',' << format_double(e.regularizer)
            << ',' << format_double(e.lipschitz_bound) << '\n';
    }
    return out.str();
}

} // namespace qrobust
