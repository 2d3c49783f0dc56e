#include "qrobust/gradients.hpp"

#include "qrobust/errors.hpp"

#include <numbers>
#include <string>

namespace qrobust {

namespace {

constexpr double kGeneratorNormSquared = 0.25;

/// Scatter per-gate angle derivatives onto weight and bias slots.
GradientVector scatter(const CircuitLayout &layout, const ModelParams &params,
                       std::span<const double> x, std::span<const double> d_angle) {
    GradientVector grad;
    grad.d_weights.assign(layout.num_weight_slots(), 0.0);
    grad.d_biases.assign(layout.num_bias_slots(), 0.0);
    std::size_t k = 0;
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            const double g = d_angle[k++];
            grad.d_biases[gate->bias_slot] = g;
            if (params.encoding_trainable) {
                grad.d_weights[gate->weight_slot] = x[gate->feature_index] * g;
            }
        }
    }
    return grad;
}

} // namespace

std::string_view to_string(GradientMethod method) {
    switch (method) {
    case GradientMethod::Adjoint:
        return "adjoint";
    case GradientMethod::ParameterShift:
        return "parameter-shift";
    }
    return "unknown";
}

GradientMethod gradient_method_from_string(std::string_view text) {
    if (text == "adjoint") {
        return GradientMethod::Adjoint;
    }
    if (text == "parameter-shift") {
        return GradientMethod::ParameterShift;
    }
    throw ConfigError("unknown gradient method '" + std::string(text) +
                      "' (expected adjoint or parameter-shift)");
}

GradientVector grad_raw_parameter_shift(const CircuitLayout &layout, const ModelParams &params,
                                        std::span<const double> x) {
    constexpr double shift = std::numbers::pi / 2.0;
    auto angles = encoding_angles(layout, params, x);
    std::vector<double> d_angle(angles.size());
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const double original = angles[k];
        angles[k] = original + shift;
        const double plus = run_circuit(layout, angles).expectation(layout.observable());
        angles[k] = original - shift;
        const double minus = run_circuit(layout, angles).expectation(layout.observable());
        angles[k] = original;
        d_angle[k] = 0.5 * (plus - minus);
    }
    return scatter(layout, params, x, d_angle);
}

namespace {

GradientVector adjoint_sweep(const CircuitLayout &layout, const ModelParams &params,
                             std::span<const double> x, double &value) {
    const auto angles = encoding_angles(layout, params, x);
    StateVector psi = run_circuit(layout, angles);
    value = psi.expectation(layout.observable());
    StateVector lambda = psi;
    lambda.apply_observable(layout.observable());

    // Walking backwards: psi_k = U_k psi_{k-1}, lambda_k = U_{k+1}^dag ... M psi_N.
    // For U = exp(-i a P / 2): df/da = 2 Re<lambda_k| (-i/2) P |psi_k>
    //                               = Im <lambda_k| P |psi_k>.
    std::vector<double> d_angle(angles.size());
    std::size_t k = angles.size();
    const auto ops = layout.ops();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (const auto *gate = std::get_if<EncodingGate>(&*it)) {
            --k;
            StateVector p_psi = psi;
            p_psi.apply_pauli(gate->qubit, gate->axis);
            d_angle[k] = inner_product(lambda, p_psi).imag();
            psi.apply_rotation(gate->qubit, gate->axis, -angles[k]);
            lambda.apply_rotation(gate->qubit, gate->axis, -angles[k]);
        } else {
            const auto &cnot = std::get<CnotGate>(*it);
            psi.apply_cnot(cnot.control, cnot.target);
            lambda.apply_cnot(cnot.control, cnot.target);
        }
    }
    return scatter(layout, params, x, d_angle);
}

} // namespace

GradientVector grad_raw_adjoint(const CircuitLayout &layout, const ModelParams &params,
                                std::span<const double> x) {
    double value = 0.0;
    return adjoint_sweep(layout, params, x, value);
}

GradientVector grad_raw(GradientMethod method, const CircuitLayout &layout,
                        const ModelParams &params, std::span<const double> x) {
    return method == GradientMethod::Adjoint ? grad_raw_adjoint(layout, params, x)
                                             : grad_raw_parameter_shift(layout, params, x);
}

double regularizer(const CircuitLayout &layout, const ModelParams &params, double lambda) {
    if (!(lambda >= 0.0)) {
        throw DomainError("regularization strength lambda must be >= 0");
    }
    check_params(layout, params);
    double sum = 0.0;
    for (const double w : params.weights) {
        sum += w * w * kGeneratorNormSquared;
    }
    return lambda * sum;
}

LossAndGradient grad_loss(const CircuitLayout &layout, const ModelParams &params,
                          const OutputScaling &scaling, std::span<const Sample> batch,
                          double lambda, GradientMethod method) {
    if (batch.empty()) {
        throw DomainError("grad_loss needs a non-empty batch");
    }
    const double penalty = regularizer(layout, params, lambda);

    LossAndGradient out;
    out.grad.d_weights.assign(layout.num_weight_slots(), 0.0);
    out.grad.d_biases.assign(layout.num_bias_slots(), 0.0);

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double sq_sum = 0.0;
    for (const auto &sample : batch) {
        check_input(layout, sample.sequence);
        double raw = 0.0;
        GradientVector g;
        if (method == GradientMethod::Adjoint) {
            g = adjoint_sweep(layout, params, sample.sequence, raw);
        } else {
            raw = evaluate_raw(layout, params, sample.sequence);
            g = grad_raw_parameter_shift(layout, params, sample.sequence);
        }
        const double residual = scaling.apply(raw) - sample.target;
        sq_sum += residual * residual;
        const double factor = 2.0 * inv_n * residual * scaling.slope;
        for (std::size_t i = 0; i < g.d_weights.size(); ++i) {
            out.grad.d_weights[i] += factor * g.d_weights[i];
        }
        for (std::size_t i = 0; i < g.d_biases.size(); ++i) {
            out.grad.d_biases[i] += factor * g.d_biases[i];
        }
    }

    if (params.encoding_trainable) {
        // d/dw [lambda/4 w^2] = lambda w / 2
        for (std::size_t i = 0; i < params.weights.size(); ++i) {
            out.grad.d_weights[i] += 2.0 * kGeneratorNormSquared * lambda * params.weights[i];
        }
    }

    out.data_loss = sq_sum * inv_n;
    out.penalty = penalty;
    out.loss = out.data_loss + penalty;
    return out;
}

} // namespace qrobust
