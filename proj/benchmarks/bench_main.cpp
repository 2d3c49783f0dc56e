#include "qrobust/qrobust.hpp"

#include <benchmark/benchmark.h>

using namespace qrobust;

namespace {

std::vector<double> bench_input(std::size_t length) {
    Rng rng(7);
    std::vector<double> x(length);
    for (auto &v : x) {
        v = rng.uniform01();
    }
    return x;
}

void BM_Rotation(benchmark::State &state) {
    const auto qubits = static_cast<std::size_t>(state.range(0));
    StateVector psi(qubits);
    const auto axis = static_cast<PauliAxis>(state.range(1));
    for (auto _ : state) {
        psi.apply_rotation(qubits / 2, axis, 0.3);
        benchmark::DoNotOptimize(psi);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << qubits));
}
BENCHMARK(BM_Rotation)
    ->ArgsProduct({{4, 10, 16}, {static_cast<int>(PauliAxis::X), static_cast<int>(PauliAxis::Y),
                                 static_cast<int>(PauliAxis::Z)}});

void BM_Cnot(benchmark::State &state) {
    const auto qubits = static_cast<std::size_t>(state.range(0));
    StateVector psi(qubits);
    psi.apply_rotation(0, PauliAxis::Y, 1.0);
    for (auto _ : state) {
        psi.apply_cnot(0, qubits - 1);
        benchmark::DoNotOptimize(psi);
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << qubits));
}
BENCHMARK(BM_Cnot)->Arg(4)->Arg(10)->Arg(16);

void BM_EvaluateRaw(benchmark::State &state) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 1, true);
    const auto x = bench_input(12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_raw(layout, params, x));
    }
}
BENCHMARK(BM_EvaluateRaw);

void BM_GradRaw(benchmark::State &state) {
    const auto method = static_cast<GradientMethod>(state.range(0));
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 1, true);
    const auto x = bench_input(12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad_raw(method, layout, params, x));
    }
    state.SetLabel(std::string(to_string(method)));
}
BENCHMARK(BM_GradRaw)
    ->Arg(static_cast<int>(GradientMethod::Adjoint))
    ->Arg(static_cast<int>(GradientMethod::ParameterShift));

void BM_GradLossFullBatch(benchmark::State &state) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 1, true);
    const auto data = generate_dataset(static_cast<std::size_t>(state.range(0)), 3.5, 4.0, 0.5, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(grad_loss(layout, params, OutputScaling{}, data.samples, 0.004));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GradLossFullBatch)->Arg(100)->Arg(200);

void BM_WorstCaseMse(benchmark::State &state) {
    const auto layout = build_logistic_circuit(4, 12);
    const auto params = init_params(layout, 1, true);
    const auto data = generate_dataset(400, 3.5, 4.0, 0.5, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            worst_case_mse(layout, params, OutputScaling{}, data.samples, 0.1, 10, 3));
    }
}
BENCHMARK(BM_WorstCaseMse)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
