#include "qrobust/statevector.hpp"

#include "qrobust/errors.hpp"

#include <bit>
#include <cmath>

namespace qrobust {

namespace {

constexpr double kImagResidueTolerance = 1e-12;

} // namespace

char to_char(PauliAxis axis) {
    switch (axis) {
    case PauliAxis::I:
        return 'I';
    case PauliAxis::X:
        return 'X';
    case PauliAxis::Y:
        return 'Y';
    case PauliAxis::Z:
        return 'Z';
    }
    return '?';
}

PauliAxis pauli_from_char(char c) {
    switch (c) {
    case 'I':
    case 'i':
        return PauliAxis::I;
    case 'X':
    case 'x':
        return PauliAxis::X;
    case 'Y':
    case 'y':
        return PauliAxis::Y;
    case 'Z':
    case 'z':
        return PauliAxis::Z;
    default:
        throw InvalidGateError(std::string("unknown Pauli symbol '") + c + "'");
    }
}

PauliStringObservable::PauliStringObservable(std::vector<PauliAxis> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty()) {
        throw ShapeError("Pauli string observable needs at least one factor");
    }
}

PauliStringObservable PauliStringObservable::all_z(std::size_t num_qubits) {
    return PauliStringObservable(std::vector<PauliAxis>(num_qubits, PauliAxis::Z));
}

PauliStringObservable PauliStringObservable::parse(std::string_view text) {
    std::vector<PauliAxis> factors;
    factors.reserve(text.size());
    for (const char c : text) {
        factors.push_back(pauli_from_char(c));
    }
    return PauliStringObservable(std::move(factors));
}

std::string PauliStringObservable::to_string() const {
    std::string out;
    out.reserve(factors_.size());
    for (const auto axis : factors_) {
        out.push_back(to_char(axis));
    }
    return out;
}

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw CapacityError("num_qubits must lie in [1, " + std::to_string(kMaxQubits) +
                            "], got " + std::to_string(num_qubits));
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = Complex{1.0, 0.0};
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const auto dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw ShapeError("amplitude count must be a power of two >= 2, got " +
                         std::to_string(dim));
    }
    const auto num_qubits = static_cast<std::size_t>(std::countr_zero(dim));
    if (num_qubits > kMaxQubits) {
        throw CapacityError("state exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm_squared() const {
    double sum = 0.0;
    for (const auto &a : amplitudes_) {
        sum += std::norm(a);
    }
    return sum;
}

std::size_t StateVector::bit_mask(std::size_t qubit) const {
    return std::size_t{1} << (num_qubits_ - 1 - qubit);
}

void StateVector::check_qubit(std::size_t qubit) const {
    if (qubit >= num_qubits_) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                         std::to_string(num_qubits_) + "-qubit register");
    }
}

void StateVector::apply_rotation(std::size_t qubit, PauliAxis axis, double angle) {
    check_qubit(qubit);
    if (axis == PauliAxis::I) {
        throw InvalidGateError("identity is not a valid rotation axis");
    }
    const std::size_t mask = bit_mask(qubit);
    const std::size_t dim = amplitudes_.size();
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);

    // Visit each (i0, i1 = i0 | mask) pair once: i0 runs over indices with
    // the qubit's bit cleared.
    switch (axis) {
    case PauliAxis::Z: {
        const Complex phase0{c, -s};
        const Complex phase1{c, s};
        for (std::size_t i = 0; i < dim; ++i) {
            amplitudes_[i] *= (i & mask) ? phase1 : phase0;
        }
        break;
    }
    case PauliAxis::Y:
        for (std::size_t base = 0; base < dim; base += 2 * mask) {
            for (std::size_t i0 = base; i0 < base + mask; ++i0) {
                const Complex a0 = amplitudes_[i0];
                const Complex a1 = amplitudes_[i0 | mask];
                amplitudes_[i0] = c * a0 - s * a1;
                amplitudes_[i0 | mask] = s * a0 + c * a1;
            }
        }
        break;
    case PauliAxis::X: {
        const Complex minus_is{0.0, -s};
        for (std::size_t base = 0; base < dim; base += 2 * mask) {
            for (std::size_t i0 = base; i0 < base + mask; ++i0) {
                const Complex a0 = amplitudes_[i0];
                const Complex a1 = amplitudes_[i0 | mask];
                amplitudes_[i0] = c * a0 + minus_is * a1;
                amplitudes_[i0 | mask] = minus_is * a0 + c * a1;
            }
        }
        break;
    }
    case PauliAxis::I:
        break;
    }
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw InvalidGateError("CNOT control and target must differ (both " +
                               std::to_string(control) + ")");
    }
    const std::size_t cmask = bit_mask(control);
    const std::size_t tmask = bit_mask(target);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

void StateVector::apply_pauli(std::size_t qubit, PauliAxis axis) {
    check_qubit(qubit);
    const std::size_t mask = bit_mask(qubit);
    const std::size_t dim = amplitudes_.size();
    switch (axis) {
    case PauliAxis::I:
        return;
    case PauliAxis::X:
        for (std::size_t i = 0; i < dim; ++i) {
            if (!(i & mask)) {
                std::swap(amplitudes_[i], amplitudes_[i | mask]);
            }
        }
        return;
    case PauliAxis::Y:
        // Y|0> = i|1>, Y|1> = -i|0>
        for (std::size_t i = 0; i < dim; ++i) {
            if (!(i & mask)) {
                const Complex a0 = amplitudes_[i];
                const Complex a1 = amplitudes_[i | mask];
                amplitudes_[i] = Complex{a1.imag(), -a1.real()};
                amplitudes_[i | mask] = Complex{-a0.imag(), a0.real()};
            }
        }
        return;
    case PauliAxis::Z:
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & mask) {
                amplitudes_[i] = -amplitudes_[i];
            }
        }
        return;
    }
}

void StateVector::apply_observable(const PauliStringObservable &observable) {
    if (observable.num_qubits() != num_qubits_) {
        throw ShapeError("observable acts on " + std::to_string(observable.num_qubits()) +
                         " qubits, state has " + std::to_string(num_qubits_));
    }
    const auto factors = observable.factors();
    for (std::size_t q = 0; q < factors.size(); ++q) {
        apply_pauli(q, factors[q]);
    }
}

double StateVector::expectation(const PauliStringObservable &observable) const {
    if (observable.num_qubits() != num_qubits_) {
        throw ShapeError("observable acts on " + std::to_string(observable.num_qubits()) +
                         " qubits, state has " + std::to_string(num_qubits_));
    }
    // P|j> = phase(j) |j ^ flip>, phase(j) = i^{nY} (-1)^{popcount(j & sign)}
    std::size_t flip = 0;
    std::size_t sign = 0;
    std::size_t num_y = 0;
    const auto factors = observable.factors();
    for (std::size_t q = 0; q < factors.size(); ++q) {
        const std::size_t mask = bit_mask(q);
        switch (factors[q]) {
        case PauliAxis::X:
            flip |= mask;
            break;
        case PauliAxis::Y:
            flip |= mask;
            sign |= mask;
            ++num_y;
            break;
        case PauliAxis::Z:
            sign |= mask;
            break;
        case PauliAxis::I:
            break;
        }
    }

    Complex sum{0.0, 0.0};
    for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
        const double parity = (std::popcount(j & sign) & 1U) ? -1.0 : 1.0;
        sum += std::conj(amplitudes_[j ^ flip]) * amplitudes_[j] * parity;
    }
    static constexpr Complex kIPowers[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    sum *= kIPowers[num_y % 4];

    if (std::abs(sum.imag()) > kImagResidueTolerance) {
        throw Error("expectation has imaginary residue " + std::to_string(sum.imag()) +
                    "; state is not normalized or observable is not Hermitian");
    }
    return sum.real();
}

StateVector init_zero_state(std::size_t num_qubits) { return StateVector(num_qubits); }

StateVector apply_rotation(StateVector state, std::size_t qubit, PauliAxis axis,
                           double angle) {
    state.apply_rotation(qubit, axis, angle);
    return state;
}

StateVector apply_cnot(StateVector state, std::size_t control, std::size_t target) {
    state.apply_cnot(control, target);
    return state;
}

double expectation(const StateVector &state, const PauliStringObservable &observable) {
    return state.expectation(observable);
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.dimension() != b.dimension()) {
        throw ShapeError("inner product of states with different dimensions");
    }
    Complex sum{0.0, 0.0};
    const auto lhs = a.amplitudes();
    const auto rhs = b.amplitudes();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        sum += std::conj(lhs[i]) * rhs[i];
    }
    return sum;
}

} // namespace qrobust
