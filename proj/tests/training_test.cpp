#include "qrobust/errors.hpp"
#include "qrobust/model_io.hpp"
#include "qrobust/training.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>

using namespace qrobust;

namespace {

struct Tiny {
    CircuitLayout layout = build_logistic_circuit(2, 3);
    Dataset data = generate_dataset(24, 3.5, 4.0, 0.5, 3);
    Dataset train_set;
    Dataset test_set;

    Tiny() { std::tie(train_set, test_set) = split(data, 12, 5); }
};

TrainingConfig tiny_config(std::size_t epochs) {
    TrainingConfig c;
    c.epochs = epochs;
    c.report_probe_count = 10;
    return c;
}

ModelParams small_params() {
    return ModelParams{{0.1, -0.2, 0.3}, {0.4, 0.5}, true};
}

} // namespace

TEST(Adam, ZeroGradientLeavesParametersAndDecaysMoments) {
    auto params = small_params();
    auto state = AdamState::for_params(params);
    state.first_moment = {1.0, 1.0, 1.0, 1.0, 1.0};
    state.second_moment = {1.0, 1.0, 1.0, 1.0, 1.0};
    state.step_count = 10;
    // Nonzero moments would move the parameters, so check the pure zero case too.
    auto fresh = small_params();
    auto fresh_state = AdamState::for_params(fresh);
    const GradientVector zero{{0.0, 0.0, 0.0}, {0.0, 0.0}};
    TrainingConfig config;
    adam_step(fresh, zero, fresh_state, config);
    EXPECT_EQ(fresh.weights, small_params().weights);
    EXPECT_EQ(fresh.biases, small_params().biases);

    adam_step(params, zero, state, config);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(state.first_moment[i], 0.9);
        EXPECT_DOUBLE_EQ(state.second_moment[i], 0.999);
    }
}

TEST(Adam, FirstStepMatchesHandFormula) {
    auto params = small_params();
    auto state = AdamState::for_params(params);
    const GradientVector g{{0.5, -2.0, 1e-3}, {3.0, -1e-9}};
    TrainingConfig config;
    adam_step(params, g, state, config);
    const auto before = small_params();
    auto expected = [&](double p, double grad) {
        return p - config.learning_rate * grad / (std::abs(grad) + config.adam_epsilon);
    };
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(params.weights[i], expected(before.weights[i], g.d_weights[i]), 1e-15);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(params.biases[i], expected(before.biases[i], g.d_biases[i]), 1e-15);
    }
    EXPECT_EQ(state.step_count, 1u);
}

TEST(Adam, ConstantGradientStepApproachesLearningRate) {
    auto params = small_params();
    auto state = AdamState::for_params(params);
    const GradientVector g{{0.7, -0.03, 5.0}, {-2.0, 1e-4}};
    TrainingConfig config;
    ModelParams previous = params;
    for (int step = 0; step < 2000; ++step) {
        previous = params;
        adam_step(params, g, state, config);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const double step = params.weights[i] - previous.weights[i];
        EXPECT_NEAR(step, -config.learning_rate * std::copysign(1.0, g.d_weights[i]), 1e-6);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const double step = params.biases[i] - previous.biases[i];
        EXPECT_NEAR(step, -config.learning_rate * std::copysign(1.0, g.d_biases[i]), 1e-6);
    }
}

TEST(Adam, FrozenWeightsAndShapeErrors) {
    ModelParams params{{0.1, 0.2}, {0.3, 0.4}, false};
    auto state = AdamState::for_params(params);
    EXPECT_EQ(state.first_moment.size(), 2u);
    const GradientVector g{{9.0, 9.0}, {1.0, 1.0}};
    adam_step(params, g, state, TrainingConfig{});
    EXPECT_EQ(params.weights, (std::vector<double>{0.1, 0.2}));
    EXPECT_NE(params.biases[0], 0.3);

    const GradientVector bad{{1.0}, {1.0, 1.0}};
    EXPECT_THROW(adam_step(params, bad, state, TrainingConfig{}), ShapeError);
    auto wrong_state = AdamState::for_params(small_params());
    EXPECT_THROW(adam_step(params, g, wrong_state, TrainingConfig{}), ShapeError);
}

TEST(EvaluateMse, Examples) {
    const auto layout = build_logistic_circuit(2, 3);
    const auto params = init_params(layout, 1, true);
    const OutputScaling scaling;
    const std::vector<double> x{0.1, 0.2, 0.3};
    const double p = predict(layout, params, scaling, x);
    EXPECT_EQ(evaluate_mse(layout, params, scaling, std::vector<Sample>{{x, p}}), 0.0);
    EXPECT_NEAR(evaluate_mse(layout, params, scaling, std::vector<Sample>{{x, p + 0.1}}), 0.01,
                1e-15);
    EXPECT_THROW(evaluate_mse(layout, params, scaling, std::vector<Sample>{}), DomainError);
}

TEST(EvaluateMse, ConstantPredictorApproachesUniformVariance) {
    // Zero weights and biases give raw +1. Offset 3.5 with slope 0.25 turns
    // that into the constant 3.75.
    const auto layout = build_logistic_circuit(4, 12);
    const ModelParams params{std::vector<double>(96, 0.0), std::vector<double>(96, 0.0), true};
    const OutputScaling scaling{3.5, 0.25};
    const auto d = generate_dataset(20001, 3.5, 4.0, 0.5, 12);
    const double mse = evaluate_mse(layout, params, scaling, d.samples);
    // Population variance of n equidistant points on an interval of width 0.5
    // is 0.5^2/12 * (n + 1)/(n - 1), tending to 0.5^2/12 = 0.0208333.
    const double n = 20001.0;
    EXPECT_NEAR(mse, 0.5 * 0.5 / 12.0 * (n + 1.0) / (n - 1.0), 1e-12);
    EXPECT_NEAR(mse, 0.5 * 0.5 / 12.0, 1e-5);
}

TEST(Train, LargeLambdaShrinksBound) {
    Tiny t;
    auto config = tiny_config(400);
    config.lambda = 10.0;
    const auto record = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    const double initial = lipschitz_bound(t.layout, record.initial_params);
    const double final_bound = lipschitz_bound(t.layout, record.final_params);
    EXPECT_LT(final_bound, 0.1 * initial);
    EXPECT_EQ(record.metrics.lipschitz.bound_raw, final_bound);
}

TEST(Train, FixedEncodingKeepsWeightsBitIdentical) {
    Tiny t;
    auto config = tiny_config(50);
    config.encoding_trainable = false;
    config.lambda = 0.03;
    const auto record = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    EXPECT_EQ(record.final_params.weights, record.initial_params.weights);
    EXPECT_NE(record.final_params.biases, record.initial_params.biases);
    ASSERT_EQ(record.trace.size(), 50u);
    for (const auto &e : record.trace) {
        EXPECT_EQ(e.lipschitz_bound, record.trace.front().lipschitz_bound);
        EXPECT_EQ(e.regularizer, record.trace.front().regularizer);
    }
}

TEST(Train, DeterministicRecords) {
    Tiny t;
    auto config = tiny_config(30);
    config.lambda = 0.004;
    config.seed = 3;
    const auto a = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    const auto b = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    EXPECT_EQ(run_record_to_json(t.layout, OutputScaling{}, a),
              run_record_to_json(t.layout, OutputScaling{}, b));
    EXPECT_EQ(trace_to_csv(a), trace_to_csv(b));
    EXPECT_EQ(a.final_params, b.final_params);
}

TEST(Train, MiniBatchDeterministicAndDistinct) {
    Tiny t;
    auto config = tiny_config(10);
    config.batch_size = 5;
    const auto a = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    const auto b = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    EXPECT_EQ(a.final_params, b.final_params);
    config.batch_size = 0;
    const auto full = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    EXPECT_NE(a.final_params, full.final_params);
}

TEST(Train, TraceLossDecreasesOnAverage) {
    Tiny t;
    const auto record = train(t.layout, t.train_set, t.test_set, OutputScaling{}, tiny_config(200));
    EXPECT_LT(record.trace.back().loss, record.trace.front().loss);
    for (std::size_t i = 0; i < record.trace.size(); ++i) {
        EXPECT_EQ(record.trace[i].epoch, i + 1);
        EXPECT_TRUE(std::isfinite(record.trace[i].loss));
    }
}

TEST(Train, ReportedMseExcludesRegularizer) {
    Tiny t;
    auto config = tiny_config(20);
    config.lambda = 1.0;
    const auto record = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    EXPECT_EQ(record.metrics.train_mse,
              evaluate_mse(t.layout, record.final_params, OutputScaling{}, t.train_set.samples));
    EXPECT_EQ(record.metrics.test_mse,
              evaluate_mse(t.layout, record.final_params, OutputScaling{}, t.test_set.samples));
    EXPECT_EQ(record.metrics.gap.gap, record.metrics.test_mse - record.metrics.train_mse);
}

TEST(Train, GradientMethodsGiveMatchingRuns) {
    Tiny t;
    auto config = tiny_config(20);
    const auto adjoint = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    config.gradient_method = GradientMethod::ParameterShift;
    const auto shift = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    for (std::size_t i = 0; i < adjoint.final_params.weights.size(); ++i) {
        EXPECT_NEAR(adjoint.final_params.weights[i], shift.final_params.weights[i], 1e-8);
    }
}

TEST(Train, Errors) {
    Tiny t;
    EXPECT_THROW(train(t.layout, Dataset{}, t.test_set, OutputScaling{}, tiny_config(1)),
                 DomainError);
    EXPECT_THROW(train(t.layout, t.train_set, Dataset{}, OutputScaling{}, tiny_config(1)),
                 DomainError);
    auto bad = tiny_config(1);
    bad.learning_rate = 0.0;
    EXPECT_THROW(train(t.layout, t.train_set, t.test_set, OutputScaling{}, bad), DomainError);
    bad = tiny_config(1);
    bad.lambda = -1.0;
    EXPECT_THROW(train(t.layout, t.train_set, t.test_set, OutputScaling{}, bad), DomainError);
}

TEST(RunRecordJson, ContainsConfigModelAndMetrics) {
    Tiny t;
    auto config = tiny_config(5);
    config.lambda = 0.03;
    const auto record = train(t.layout, t.train_set, t.test_set, OutputScaling{}, config);
    const auto doc = nlohmann::json::parse(run_record_to_json(t.layout, OutputScaling{}, record));
    EXPECT_EQ(doc["config"]["lambda"].get<double>(), 0.03);
    EXPECT_EQ(doc["config"]["gradient_method"], "adjoint");
    EXPECT_EQ(doc["trace_epochs"].get<std::size_t>(), 5u);
    EXPECT_EQ(doc["metrics"]["test_mse"].get<double>(), record.metrics.test_mse);
    EXPECT_EQ(doc["model"]["weights"].get<std::vector<double>>(), record.final_params.weights);

    const auto back = checkpoint_from_json(run_record_to_json(t.layout, OutputScaling{}, record));
    EXPECT_EQ(back.params, record.final_params);
    EXPECT_EQ(back.layout, t.layout);

    const auto csv = trace_to_csv(record);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,loss,regularizer,lipschitz_bound");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}
