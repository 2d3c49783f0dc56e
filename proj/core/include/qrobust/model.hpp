#pragma once

#include "qrobust/statevector.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace qrobust {

/**
 * Data-encoding rotation exp(-i (w * x[feature_index] + theta) P / 2).
 *
 * The weight w lives at params.weights[weight_slot] and the bias theta at
 * params.biases[bias_slot]. Each gate reads exactly one input feature, so the
 * gate's input-weight vector has a single nonzero entry and its norm is |w|.
 */
struct EncodingGate {
    std::size_t qubit = 0;
    PauliAxis axis = PauliAxis::Y;
    std::size_t feature_index = 0;
    std::size_t weight_slot = 0;
    std::size_t bias_slot = 0;

    bool operator==(const EncodingGate &) const = default;
};

/// Parameter-independent entangler.
struct CnotGate {
    std::size_t control = 0;
    std::size_t target = 1;

    bool operator==(const CnotGate &) const = default;
};

using CircuitOp = std::variant<EncodingGate, CnotGate>;

/**
 * Static gate sequence plus measured observable. Ops execute left to right
 * on |0...0>. Construction validates qubit indices, feature indices, and
 * that weight and bias slots each form a permutation of 0..G-1 where G is
 * the number of encoding gates.
 */
class CircuitLayout {
  public:
    CircuitLayout(std::size_t num_qubits, std::size_t sequence_length,
                  std::vector<CircuitOp> ops, PauliStringObservable observable);

    [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t sequence_length() const { return sequence_length_; }
    [[nodiscard]] std::span<const CircuitOp> ops() const { return ops_; }
    [[nodiscard]] const PauliStringObservable &observable() const { return observable_; }

    [[nodiscard]] std::size_t num_encoding_gates() const { return num_encoding_; }
    [[nodiscard]] std::size_t num_cnots() const { return ops_.size() - num_encoding_; }
    [[nodiscard]] std::size_t num_weight_slots() const { return num_encoding_; }
    [[nodiscard]] std::size_t num_bias_slots() const { return num_encoding_; }
    [[nodiscard]] std::size_t num_parameters() const { return 2 * num_encoding_; }

    bool operator==(const CircuitLayout &) const = default;

  private:
    std::size_t num_qubits_;
    std::size_t sequence_length_;
    std::vector<CircuitOp> ops_;
    PauliStringObservable observable_;
    std::size_t num_encoding_ = 0;
};

/// Trainable parameter set. With encoding_trainable = false the weights are
/// frozen and only the biases are optimized (fixed-encoding model).
struct ModelParams {
    std::vector<double> weights;
    std::vector<double> biases;
    bool encoding_trainable = true;

    bool operator==(const ModelParams &) const = default;
};

/// Affine map from the raw expectation in [-1, 1] to the target domain.
struct OutputScaling {
    double offset = 3.75;
    double slope = 0.25;

    void validate() const;
    [[nodiscard]] double apply(double raw) const { return offset + slope * raw; }
};

/**
 * Sequential re-uploading circuit for time series: for every timestep i,
 * each qubit j (ascending) receives RZ(alpha_ij) then RY(beta_ij), both
 * reading x_i, followed by an open CNOT chain 0->1, 1->2, ..., (q-2)->(q-1).
 * Observable is Z on every qubit.
 *
 * Slot numbering: gate (i, j, k) with k = 0 for Z and 1 for Y uses slot
 * (i * num_qubits + j) * 2 + k for both its weight and its bias.
 */
CircuitLayout build_logistic_circuit(std::size_t num_qubits, std::size_t sequence_length);

/// Every weight and bias i.i.d. uniform on [-pi/2, pi/2], deterministic in seed.
ModelParams init_params(const CircuitLayout &layout, std::uint64_t seed,
                        bool encoding_trainable);

/// Throws ShapeError if the parameter arrays do not match the layout.
void check_params(const CircuitLayout &layout, const ModelParams &params);

/// Throws ShapeError if x has the wrong length.
void check_input(const CircuitLayout &layout, std::span<const double> x);

/// Rotation angle of every encoding gate, in op order.
std::vector<double> encoding_angles(const CircuitLayout &layout, const ModelParams &params,
                                    std::span<const double> x);

/// Runs the layout on |0...0> with the given per-encoding-gate angles.
StateVector run_circuit(const CircuitLayout &layout, std::span<const double> angles);

/// <0|U(x)^dagger M U(x)|0> in [-1, 1].
double evaluate_raw(const CircuitLayout &layout, const ModelParams &params,
                    std::span<const double> x);

/// scaling.offset + scaling.slope * evaluate_raw(...)
double predict(const CircuitLayout &layout, const ModelParams &params,
               const OutputScaling &scaling, std::span<const double> x);

} // namespace qrobust
