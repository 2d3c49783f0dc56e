#pragma once

#include "qrobust/model.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qrobust {

/// Spectral norm of a rotation generator P/2.
inline constexpr double kRotationGeneratorNorm = 0.5;

/// Input sensitivity of one gate exp(-i (w^T x + theta) H): its weight
/// vector w and the spectral norm of H. Constant gates have w = 0.
struct GateSensitivity {
    std::vector<double> input_weights;
    double generator_norm = kRotationGeneratorNorm;
};

/// 2 ||M|| sum_j ||w_j||_2 ||H_j||  for arbitrary dense weight vectors.
double lipschitz_bound(double observable_norm, std::span<const GateSensitivity> gates);

/// The same bound for a layout: with single-feature gates, ||w_j|| = |w_j|,
/// ||H_j|| = 1/2 and ||M|| = 1, so it reduces to sum_j |w_j|. Biases and
/// CNOTs contribute nothing.
double lipschitz_bound(const CircuitLayout &layout, const ModelParams &params);

/**
 * Largest sampled difference quotient |f(x + d) - f(x)| / ||d|| of the raw
 * model output. Base points x are uniform on [0, 1]^input_dim, directions are
 * uniform on the sphere and ||d|| = perturbation_scale.
 */
double empirical_lipschitz(const CircuitLayout &layout, const ModelParams &params,
                           std::size_t probe_count, std::size_t input_dim,
                           double perturbation_scale, std::uint64_t seed);

struct LipschitzReport {
    double bound_raw = 0.0;           ///< for the raw expectation value
    double bound_scaled = 0.0;        ///< slope * bound_raw, in target units
    double empirical_estimate = 0.0;  ///< max sampled quotient, raw units
    std::size_t num_probe_pairs = 0;
};

LipschitzReport lipschitz_report(const CircuitLayout &layout, const ModelParams &params,
                                 const OutputScaling &scaling, std::size_t probe_count,
                                 double perturbation_scale, std::uint64_t seed);

struct GapReport {
    double train_mse = 0.0;
    double test_mse = 0.0;
    double gap = 0.0;  ///< test_mse - train_mse; may be negative
};

/// Throws DomainError if either MSE is negative.
GapReport generalization_gap(double train_mse, double test_mse);

} // namespace qrobust
