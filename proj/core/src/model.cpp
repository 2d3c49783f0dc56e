#include "qrobust/model.hpp"

#include "qrobust/errors.hpp"
#include "qrobust/rng.hpp"

#include <numbers>
#include <string>

namespace qrobust {

namespace {

void check_permutation(const std::vector<std::size_t> &slots, const char *what) {
    std::vector<bool> seen(slots.size(), false);
    for (const auto slot : slots) {
        if (slot >= slots.size()) {
            throw IndexError(std::string(what) + " slot " + std::to_string(slot) +
                             " out of range for " + std::to_string(slots.size()) +
                             " encoding gates");
        }
        if (seen[slot]) {
            throw InvalidGateError(std::string(what) + " slot " + std::to_string(slot) +
                                   " used by more than one gate");
        }
        seen[slot] = true;
    }
}

} // namespace

CircuitLayout::CircuitLayout(std::size_t num_qubits, std::size_t sequence_length,
                             std::vector<CircuitOp> ops, PauliStringObservable observable)
    : num_qubits_(num_qubits), sequence_length_(sequence_length), ops_(std::move(ops)),
      observable_(std::move(observable)) {
    if (num_qubits_ < 1 || num_qubits_ > StateVector::kMaxQubits) {
        throw CapacityError("layout num_qubits must lie in [1, " +
                            std::to_string(StateVector::kMaxQubits) + "]");
    }
    if (sequence_length_ < 1) {
        throw DomainError("layout sequence_length must be >= 1");
    }
    if (observable_.num_qubits() != num_qubits_) {
        throw ShapeError("observable length " + std::to_string(observable_.num_qubits()) +
                         " does not match num_qubits " + std::to_string(num_qubits_));
    }

    std::vector<std::size_t> weight_slots;
    std::vector<std::size_t> bias_slots;
    for (const auto &op : ops_) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            if (gate->qubit >= num_qubits_) {
                throw IndexError("encoding gate qubit " + std::to_string(gate->qubit) +
                                 " out of range");
            }
            if (gate->axis == PauliAxis::I) {
                throw InvalidGateError("encoding gate axis must be X, Y or Z");
            }
            if (gate->feature_index >= sequence_length_) {
                throw IndexError("encoding gate feature_index " +
                                 std::to_string(gate->feature_index) +
                                 " >= sequence_length " + std::to_string(sequence_length_));
            }
            weight_slots.push_back(gate->weight_slot);
            bias_slots.push_back(gate->bias_slot);
        } else {
            const auto &cnot = std::get<CnotGate>(op);
            if (cnot.control >= num_qubits_ || cnot.target >= num_qubits_) {
                throw IndexError("CNOT qubit out of range");
            }
            if (cnot.control == cnot.target) {
                throw InvalidGateError("CNOT control and target must differ");
            }
        }
    }
    check_permutation(weight_slots, "weight");
    check_permutation(bias_slots, "bias");
    num_encoding_ = weight_slots.size();
}

void OutputScaling::validate() const {
    if (!(slope > 0.0)) {
        throw DomainError("output scaling slope must be > 0");
    }
}

CircuitLayout build_logistic_circuit(std::size_t num_qubits, std::size_t sequence_length) {
    if (num_qubits < 2) {
        throw DomainError("logistic circuit needs at least 2 qubits");
    }
    if (sequence_length < 1) {
        throw DomainError("logistic circuit needs sequence_length >= 1");
    }
    std::vector<CircuitOp> ops;
    ops.reserve(sequence_length * (3 * num_qubits - 1));
    for (std::size_t step = 0; step < sequence_length; ++step) {
        for (std::size_t q = 0; q < num_qubits; ++q) {
            const std::size_t base = (step * num_qubits + q) * 2;
            ops.emplace_back(EncodingGate{q, PauliAxis::Z, step, base, base});
            ops.emplace_back(EncodingGate{q, PauliAxis::Y, step, base + 1, base + 1});
        }
        for (std::size_t q = 0; q + 1 < num_qubits; ++q) {
            ops.emplace_back(CnotGate{q, q + 1});
        }
    }
    return CircuitLayout(num_qubits, sequence_length, std::move(ops),
                         PauliStringObservable::all_z(num_qubits));
}

ModelParams init_params(const CircuitLayout &layout, std::uint64_t seed,
                        bool encoding_trainable) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    Rng rng(seed);
    ModelParams params;
    params.encoding_trainable = encoding_trainable;
    params.weights.resize(layout.num_weight_slots());
    params.biases.resize(layout.num_bias_slots());
    // Weights first, then biases, each in slot order.
    for (auto &w : params.weights) {
        w = rng.uniform(-half_pi, half_pi);
    }
    for (auto &b : params.biases) {
        b = rng.uniform(-half_pi, half_pi);
    }
    return params;
}

void check_params(const CircuitLayout &layout, const ModelParams &params) {
    if (params.weights.size() != layout.num_weight_slots() ||
        params.biases.size() != layout.num_bias_slots()) {
        throw ShapeError("parameter arrays (" + std::to_string(params.weights.size()) + ", " +
                         std::to_string(params.biases.size()) + ") do not match layout (" +
                         std::to_string(layout.num_weight_slots()) + ", " +
                         std::to_string(layout.num_bias_slots()) + ")");
    }
}

void check_input(const CircuitLayout &layout, std::span<const double> x) {
    if (x.size() != layout.sequence_length()) {
        throw ShapeError("input length " + std::to_string(x.size()) +
                         " does not match sequence_length " +
                         std::to_string(layout.sequence_length()));
    }
}

std::vector<double> encoding_angles(const CircuitLayout &layout, const ModelParams &params,
                                    std::span<const double> x) {
    check_params(layout, params);
    check_input(layout, x);
    std::vector<double> angles;
    angles.reserve(layout.num_encoding_gates());
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            angles.push_back(params.weights[gate->weight_slot] * x[gate->feature_index] +
                             params.biases[gate->bias_slot]);
        }
    }
    return angles;
}

StateVector run_circuit(const CircuitLayout &layout, std::span<const double> angles) {
    if (angles.size() != layout.num_encoding_gates()) {
        throw ShapeError("angle count does not match encoding gate count");
    }
    StateVector state(layout.num_qubits());
    std::size_t k = 0;
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            state.apply_rotation(gate->qubit, gate->axis, angles[k++]);
        } else {
            const auto &cnot = std::get<CnotGate>(op);
            state.apply_cnot(cnot.control, cnot.target);
        }
    }
    return state;
}

double evaluate_raw(const CircuitLayout &layout, const ModelParams &params,
                    std::span<const double> x) {
    const auto angles = encoding_angles(layout, params, x);
    return run_circuit(layout, angles).expectation(layout.observable());
}

double predict(const CircuitLayout &layout, const ModelParams &params,
               const OutputScaling &scaling, std::span<const double> x) {
    return scaling.apply(evaluate_raw(layout, params, x));
}

} // namespace qrobust
