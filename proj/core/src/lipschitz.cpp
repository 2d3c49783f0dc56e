#include "qrobust/lipschitz.hpp"

#include "qrobust/errors.hpp"
#include "qrobust/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qrobust {

double lipschitz_bound(double observable_norm, std::span<const GateSensitivity> gates) {
    double sum = 0.0;
    for (const auto &gate : gates) {
        double sq = 0.0;
        for (const double w : gate.input_weights) {
            sq += w * w;
        }
        sum += std::sqrt(sq) * gate.generator_norm;
    }
    return 2.0 * observable_norm * sum;
}

double lipschitz_bound(const CircuitLayout &layout, const ModelParams &params) {
    check_params(layout, params);
    double sum = 0.0;
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            sum += std::abs(params.weights[gate->weight_slot]) * kRotationGeneratorNorm;
        }
    }
    return 2.0 * layout.observable().spectral_norm() * sum;
}

double empirical_lipschitz(const CircuitLayout &layout, const ModelParams &params,
                           std::size_t probe_count, std::size_t input_dim,
                           double perturbation_scale, std::uint64_t seed) {
    if (probe_count < 1) {
        throw DomainError("probe_count must be >= 1");
    }
    if (!(perturbation_scale > 0.0)) {
        throw DomainError("perturbation_scale must be > 0");
    }
    if (input_dim != layout.sequence_length()) {
        throw ShapeError("input_dim " + std::to_string(input_dim) +
                         " does not match sequence_length " +
                         std::to_string(layout.sequence_length()));
    }
    Rng rng(seed);
    std::vector<double> x(input_dim);
    std::vector<double> direction(input_dim);
    std::vector<double> shifted(input_dim);
    double best = 0.0;
    for (std::size_t p = 0; p < probe_count; ++p) {
        for (auto &v : x) {
            v = rng.uniform01();
        }
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (auto &v : direction) {
                v = rng.normal();
                norm_sq += v * v;
            }
        } while (norm_sq == 0.0);
        const double scale = perturbation_scale / std::sqrt(norm_sq);
        double delta_sq = 0.0;
        for (std::size_t i = 0; i < input_dim; ++i) {
            shifted[i] = x[i] + direction[i] * scale;
            const double d = shifted[i] - x[i];
            delta_sq += d * d;
        }
        // Use the realized ||d|| so rounding in x + d cannot inflate the quotient.
        const double delta_norm = std::sqrt(delta_sq);
        if (delta_norm == 0.0) {
            continue;
        }
        const double diff =
            std::abs(evaluate_raw(layout, params, shifted) - evaluate_raw(layout, params, x));
        best = std::max(best, diff / delta_norm);
    }
    return best;
}

LipschitzReport lipschitz_report(const CircuitLayout &layout, const ModelParams &params,
                                 const OutputScaling &scaling, std::size_t probe_count,
                                 double perturbation_scale, std::uint64_t seed) {
    LipschitzReport report;
    report.bound_raw = lipschitz_bound(layout, params);
    report.bound_scaled = scaling.slope * report.bound_raw;
    report.num_probe_pairs = probe_count;
    if (probe_count > 0) {
        report.empirical_estimate = empirical_lipschitz(
            layout, params, probe_count, layout.sequence_length(), perturbation_scale, seed);
    }
    return report;
}

GapReport generalization_gap(double train_mse, double test_mse) {
    if (!(train_mse >= 0.0) || !(test_mse >= 0.0)) {
        throw DomainError("MSE values must be >= 0");
    }
    return GapReport{train_mse, test_mse, test_mse - train_mse};
}

} // namespace qrobust
