#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrobust {

using Complex = std::complex<double>;

/// Single-qubit Pauli alphabet. I is only valid inside observable strings.
enum class PauliAxis : std::uint8_t { I, X, Y, Z };

char to_char(PauliAxis axis);
PauliAxis pauli_from_char(char c);

/**
 * Tensor product of single-qubit Paulis, one factor per qubit (factor 0 acts
 * on qubit 0). Every such operator has eigenvalues in {-1, +1}, so its
 * spectral norm is 1.
 */
class PauliStringObservable {
  public:
    explicit PauliStringObservable(std::vector<PauliAxis> factors);

    /// Z on every qubit.
    static PauliStringObservable all_z(std::size_t num_qubits);
    /// Parse e.g. "ZZZZ" or "XIY".
    static PauliStringObservable parse(std::string_view text);

    [[nodiscard]] std::size_t num_qubits() const { return factors_.size(); }
    [[nodiscard]] std::span<const PauliAxis> factors() const { return factors_; }
    [[nodiscard]] double spectral_norm() const { return 1.0; }
    [[nodiscard]] std::string to_string() const;

    bool operator==(const PauliStringObservable &) const = default;

  private:
    std::vector<PauliAxis> factors_;
};

/**
 * Dense state of a q-qubit register.
 *
 * Qubit 0 is the most significant bit of the amplitude index, so for two
 * qubits the basis order is |q0 q1> = |00>, |01>, |10>, |11>.
 *
 * Gates are applied in place. A StateVector must not be shared between
 * threads while it is being mutated.
 */
class StateVector {
  public:
    static constexpr std::size_t kMaxQubits = 24;

    /// |0...0> on `num_qubits` qubits. Throws CapacityError outside [1, 24].
    explicit StateVector(std::size_t num_qubits);

    /// Wraps explicit amplitudes. Length must be a power of two >= 2; the
    /// vector is taken as given (not renormalized).
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t index) const {
        return amplitudes_[index];
    }

    [[nodiscard]] double norm_squared() const;

    /// exp(-i * angle * P / 2) on `qubit`, P in {X, Y, Z}.
    void apply_rotation(std::size_t qubit, PauliAxis axis, double angle);

    /// Flips `target` on every basis state whose `control` bit is 1.
    void apply_cnot(std::size_t control, std::size_t target);

    /// Applies the bare Pauli operator P on `qubit` (not a rotation).
    void apply_pauli(std::size_t qubit, PauliAxis axis);

    /// Applies every factor of the Pauli string, i.e. |psi> -> M|psi>.
    void apply_observable(const PauliStringObservable &observable);

    /// <psi|M|psi>. Throws ShapeError on length mismatch.
    [[nodiscard]] double expectation(const PauliStringObservable &observable) const;

    bool operator==(const StateVector &) const = default;

  private:
    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t bit_mask(std::size_t qubit) const;
    void check_qubit(std::size_t qubit) const;

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// |0...0> on `num_qubits` qubits.
StateVector init_zero_state(std::size_t num_qubits);

/// Functional forms of the in-place gate methods.
StateVector apply_rotation(StateVector state, std::size_t qubit, PauliAxis axis,
                           double angle);
StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target);
double expectation(const StateVector &state, const PauliStringObservable &observable);

/// <a|b>. Dimensions must agree.
Complex inner_product(const StateVector &a, const StateVector &b);

} // namespace qrobust
