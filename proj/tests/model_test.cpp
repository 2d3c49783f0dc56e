#include "dense_oracle.hpp"
#include "qrobust/errors.hpp"
#include "qrobust/lipschitz.hpp"
#include "qrobust/model.hpp"
#include "qrobust/model_io.hpp"
#include "qrobust/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qrobust;

namespace {

std::size_t count_cnots(const CircuitLayout &layout) {
    std::size_t n = 0;
    for (const auto &op : layout.ops()) {
        n += std::holds_alternative<CnotGate>(op) ? 1 : 0;
    }
    return n;
}

CircuitLayout single_y_gate_layout() {
    return CircuitLayout(1, 1, {EncodingGate{0, PauliAxis::Y, 0, 0, 0}},
                         PauliStringObservable::all_z(1));
}

std::vector<double> random_input(std::size_t length, Rng &rng) {
    std::vector<double> x(length);
    for (auto &v : x) {
        v = rng.uniform01();
    }
    return x;
}

} // namespace

TEST(BuildLogisticCircuit, FourQubitTwelveStepCounts) {
    const auto layout = build_logistic_circuit(4, 12);
    EXPECT_EQ(layout.num_encoding_gates(), 96U);
    EXPECT_EQ(count_cnots(layout), 36U);
    EXPECT_EQ(layout.num_cnots(), 36U);
    EXPECT_EQ(layout.num_parameters(), 192U);
    EXPECT_EQ(layout.observable().to_string(), "ZZZZ");
}

TEST(BuildLogisticCircuit, SmallInstances) {
    const auto a = build_logistic_circuit(2, 1);
    EXPECT_EQ(a.num_encoding_gates(), 4U);
    EXPECT_EQ(count_cnots(a), 1U);

    const auto b = build_logistic_circuit(4, 1);
    EXPECT_EQ(b.num_encoding_gates(), 8U);
    EXPECT_EQ(count_cnots(b), 3U);
}

TEST(BuildLogisticCircuit, GateOrderPerTimestep) {
    const auto layout = build_logistic_circuit(3, 2);
    const auto ops = layout.ops();
    ASSERT_EQ(ops.size(), 16U);
    // timestep 0: (Z, Y) on qubits 0, 1, 2 then CNOT 0->1, 1->2
    for (std::size_t step = 0; step < 2; ++step) {
        const std::size_t base = step * 8;
        for (std::size_t q = 0; q < 3; ++q) {
            const auto &rz = std::get<EncodingGate>(ops[base + 2 * q]);
            const auto &ry = std::get<EncodingGate>(ops[base + 2 * q + 1]);
            EXPECT_EQ(rz.axis, PauliAxis::Z);
            EXPECT_EQ(ry.axis, PauliAxis::Y);
            EXPECT_EQ(rz.qubit, q);
            EXPECT_EQ(ry.qubit, q);
            EXPECT_EQ(rz.feature_index, step);
            EXPECT_EQ(ry.feature_index, step);
        }
        EXPECT_EQ(std::get<CnotGate>(ops[base + 6]), (CnotGate{0, 1}));
        EXPECT_EQ(std::get<CnotGate>(ops[base + 7]), (CnotGate{1, 2}));
    }
}

TEST(BuildLogisticCircuit, RejectsBadSizes) {
    EXPECT_THROW(build_logistic_circuit(1, 12), DomainError);
    EXPECT_THROW(build_logistic_circuit(4, 0), DomainError);
}

TEST(CircuitLayout, ValidatesSlotsAndIndices) {
    const auto z = PauliStringObservable::all_z(2);
    EXPECT_THROW(CircuitLayout(2, 1,
                               {EncodingGate{0, PauliAxis::Y, 0, 0, 0},
                                EncodingGate{1, PauliAxis::Y, 0, 0, 1}},
                               z),
                 InvalidGateError);
    EXPECT_THROW(CircuitLayout(2, 1, {EncodingGate{0, PauliAxis::Y, 1, 0, 0}}, z), IndexError);
    EXPECT_THROW(CircuitLayout(2, 1, {EncodingGate{2, PauliAxis::Y, 0, 0, 0}}, z), IndexError);
    EXPECT_THROW(CircuitLayout(2, 1, {EncodingGate{0, PauliAxis::I, 0, 0, 0}}, z),
                 InvalidGateError);
    EXPECT_THROW(CircuitLayout(2, 1, {CnotGate{1, 1}}, z), InvalidGateError);
    EXPECT_THROW(CircuitLayout(3, 1, {}, z), ShapeError);
}

TEST(InitParams, DeterministicAndInRange) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto a = init_params(layout, 17, true);
    const auto b = init_params(layout, 17, true);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.weights.size(), 96U);
    EXPECT_EQ(a.biases.size(), 96U);

    const auto c = init_params(layout, 18, true);
    EXPECT_NE(a.weights, c.weights);

    for (const auto &params : {a, c}) {
        for (const double v : params.weights) {
            EXPECT_GE(v, -std::numbers::pi / 2);
            EXPECT_LE(v, std::numbers::pi / 2);
        }
        for (const double v : params.biases) {
            EXPECT_GE(v, -std::numbers::pi / 2);
            EXPECT_LE(v, std::numbers::pi / 2);
        }
    }
    EXPECT_FALSE(init_params(layout, 17, false).encoding_trainable);
    EXPECT_EQ(init_params(layout, 17, false).weights, a.weights);
}

TEST(EvaluateRaw, ZeroParametersGivePlusOne) {
    const auto layout = build_logistic_circuit(4, 12);
    ModelParams params{std::vector<double>(96, 0.0), std::vector<double>(96, 0.0), true};
    Rng rng(3);
    for (int i = 0; i < 5; ++i) {
        EXPECT_NEAR(evaluate_raw(layout, params, random_input(12, rng)), 1.0, 1e-12);
    }
}

TEST(EvaluateRaw, ZeroWeightsIgnoreInput) {
    const auto layout = build_logistic_circuit(4, 12);
    auto params = init_params(layout, 4, true);
    std::fill(params.weights.begin(), params.weights.end(), 0.0);
    Rng rng(8);
    const double reference = evaluate_raw(layout, params, random_input(12, rng));
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(evaluate_raw(layout, params, random_input(12, rng)), reference);
    }
}

TEST(EvaluateRaw, SingleYGateAtPi) {
    const auto layout = single_y_gate_layout();
    const ModelParams params{{1.0}, {0.0}, true};
    const std::vector<double> x{std::numbers::pi};
    const double value = evaluate_raw(layout, params, x);
    const double angles[] = {std::numbers::pi};
    EXPECT_NEAR(oracle::model_output(layout, angles), -1.0, 1e-12);
    EXPECT_NEAR(value, -1.0, 1e-12);
}

TEST(EvaluateRaw, MatchesDenseOracleOnSmallCircuit) {
    const auto layout = build_logistic_circuit(3, 2);
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const auto params = init_params(layout, 100 + trial, true);
        const auto x = random_input(2, rng);
        const auto angles = encoding_angles(layout, params, x);
        EXPECT_NEAR(evaluate_raw(layout, params, x), oracle::model_output(layout, angles), 1e-12);
    }
}

TEST(EvaluateRaw, ShapeErrors) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 1, true);
    EXPECT_THROW((void)evaluate_raw(layout, params, std::vector<double>(11, 0.5)), ShapeError);
    ModelParams short_params = params;
    short_params.weights.pop_back();
    EXPECT_THROW((void)evaluate_raw(layout, short_params, std::vector<double>(12, 0.5)),
                 ShapeError);
}

TEST(Predict, ScalingEndpoints) {
    const OutputScaling scaling;
    EXPECT_DOUBLE_EQ(scaling.apply(1.0), 4.0);
    EXPECT_DOUBLE_EQ(scaling.apply(-1.0), 3.5);
    EXPECT_DOUBLE_EQ(scaling.apply(0.0), 3.75);

    const auto layout = single_y_gate_layout();
    EXPECT_NEAR(predict(layout, ModelParams{{1.0}, {0.0}, true}, scaling,
                        std::vector<double>{std::numbers::pi}),
                3.5, 1e-12);
    EXPECT_NEAR(predict(layout, ModelParams{{0.0}, {0.0}, true}, scaling,
                        std::vector<double>{0.3}),
                4.0, 1e-12);
}

TEST(OutputScaling, RejectsNonPositiveSlope) {
    EXPECT_THROW((OutputScaling{3.75, 0.0}.validate()), DomainError);
    EXPECT_THROW((OutputScaling{3.75, -0.25}.validate()), DomainError);
    EXPECT_NO_THROW(OutputScaling{}.validate());
}

// ---- properties ----

TEST(ModelProperty, PredictionsStayInTargetDomain) {
    const auto layout = build_logistic_circuit(4, 12);
    const OutputScaling scaling;
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        auto params = init_params(layout, 1000 + trial, true);
        for (auto &w : params.weights) {
            w *= rng.uniform(0.0, 5.0);
        }
        std::vector<double> x(12);
        for (auto &v : x) {
            v = rng.uniform(-3.0, 3.0);
        }
        const double y = predict(layout, params, scaling, x);
        EXPECT_GE(y, 3.5 - 1e-12);
        EXPECT_LE(y, 4.0 + 1e-12);
    }
}

TEST(ModelProperty, FixedEncodingIsBitIdenticalToGeneralModel) {
    const auto layout = build_logistic_circuit(4, 12);
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto trainable = init_params(layout, 50 + trial, true);
        auto frozen = trainable;
        frozen.encoding_trainable = false;
        const auto x = random_input(12, rng);
        EXPECT_EQ(evaluate_raw(layout, trainable, x), evaluate_raw(layout, frozen, x));
    }
}

TEST(ModelProperty, EvaluationIsDeterministic) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 9, true);
    Rng rng(1);
    const auto x = random_input(12, rng);
    const double first = evaluate_raw(layout, params, x);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(evaluate_raw(layout, params, x), first);
    }
}

TEST(ModelProperty, DifferencesRespectLipschitzBound) {
    const auto layout = build_logistic_circuit(4, 12);
    Rng rng(2718);
    for (int model = 0; model < 5; ++model) {
        const auto params = init_params(layout, 300 + model, true);
        const double bound = lipschitz_bound(layout, params);
        for (int pair = 0; pair < 200; ++pair) {
            const auto x = random_input(12, rng);
            std::vector<double> shifted = x;
            const double radius = rng.uniform(1e-4, 0.1);
            double norm_sq = 0.0;
            std::vector<double> dir(12);
            for (auto &d : dir) {
                d = rng.normal();
                norm_sq += d * d;
            }
            double delta_sq = 0.0;
            for (std::size_t i = 0; i < 12; ++i) {
                shifted[i] += dir[i] * radius / std::sqrt(norm_sq);
                delta_sq += (shifted[i] - x[i]) * (shifted[i] - x[i]);
            }
            const double diff =
                std::abs(evaluate_raw(layout, params, shifted) - evaluate_raw(layout, params, x));
            EXPECT_LE(diff, bound * std::sqrt(delta_sq));
        }
    }
}

// ---- checkpoint JSON ----

TEST(Checkpoint, RoundTripPreservesLayoutAndParamsExactly) {
    Rng rng(404);
    for (int trial = 0; trial < 10; ++trial) {
        const auto layout = build_logistic_circuit(2 + rng.below(3), 1 + rng.below(12));
        auto params = init_params(layout, rng.next_u64(), rng.below(2) == 0);
        params.weights.front() = 1e-300;
        params.biases.back() = -0.1 + 0.2;
        const auto restored = checkpoint_from_json(checkpoint_to_json(layout, params));
        EXPECT_EQ(restored.layout, layout);
        EXPECT_EQ(restored.params, params);
    }
}

TEST(Checkpoint, RejectsMalformedDocuments) {
    const auto layout = build_logistic_circuit(2, 1);
    const auto params = init_params(layout, 1, true);
    auto text = checkpoint_to_json(layout, params);

    EXPECT_THROW(checkpoint_from_json("{not json"), ConfigError);
    try {
        checkpoint_from_json(R"({"version": 1, "num_qubits": 2})");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("sequence_length"), std::string::npos);
    }
    const auto pos = text.find("\"cnot\"");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 6, "\"swap\"");
    try {
        checkpoint_from_json(text);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_NE(std::string(e.what()).find("ops["), std::string::npos);
    }
}
