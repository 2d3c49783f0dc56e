#pragma once

#include "qrobust/dataset.hpp"
#include "qrobust/model.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace qrobust {

/// Derivatives with respect to every weight and bias slot. Weight entries are
/// exactly 0 when the encoding is frozen.
struct GradientVector {
    std::vector<double> d_weights;
    std::vector<double> d_biases;

    bool operator==(const GradientVector &) const = default;
};

enum class GradientMethod { Adjoint, ParameterShift };

std::string_view to_string(GradientMethod method);
GradientMethod gradient_method_from_string(std::string_view text);

/// Two-term shift rule: df/dalpha = [f(alpha + pi/2) - f(alpha - pi/2)] / 2,
/// exact for exp(-i alpha P / 2) gates. Costs 2G circuit evaluations.
GradientVector grad_raw_parameter_shift(const CircuitLayout &layout, const ModelParams &params,
                                        std::span<const double> x);

/// Adjoint (reverse-sweep) differentiation: one forward pass and one
/// backward pass over the gate list.
GradientVector grad_raw_adjoint(const CircuitLayout &layout, const ModelParams &params,
                                std::span<const double> x);

GradientVector grad_raw(GradientMethod method, const CircuitLayout &layout,
                        const ModelParams &params, std::span<const double> x);

/// lambda * sum_j |w_j|^2 ||H_j||^2 with ||H_j|| = 1/2, i.e. lambda/4 * sum w^2.
/// Biases do not enter. Throws DomainError for lambda < 0.
double regularizer(const CircuitLayout &layout, const ModelParams &params, double lambda);

struct LossAndGradient {
    double loss = 0.0;        ///< data MSE + regularizer
    double data_loss = 0.0;   ///< MSE on scaled predictions
    double penalty = 0.0;     ///< regularizer value
    GradientVector grad;
};

/**
 * Regularized squared-error loss over `batch` and its exact gradient:
 *   loss = (1/n) sum_k (predict(x_k) - y_k)^2 + regularizer(lambda)
 * Per-sample contributions are summed in batch order, so the result does not
 * depend on how the work is scheduled.
 */
LossAndGradient grad_loss(const CircuitLayout &layout, const ModelParams &params,
                          const OutputScaling &scaling, std::span<const Sample> batch,
                          double lambda, GradientMethod method = GradientMethod::Adjoint);

} // namespace qrobust
