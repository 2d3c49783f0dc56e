#pragma once

// Explicit 2^q x 2^q matrix constructions of gates, circuits and
// observables. Built from Kronecker products and Eigen's matrix exponential,
// independently of the in-place kernels in qrobust.

#include "qrobust/model.hpp"
#include "qrobust/statevector.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstddef>
#include <span>
#include <variant>

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Matrix pauli(qrobust::PauliAxis axis) {
    Matrix m(2, 2);
    switch (axis) {
    case qrobust::PauliAxis::I:
        m << 1, 0, 0, 1;
        break;
    case qrobust::PauliAxis::X:
        m << 0, 1, 1, 0;
        break;
    case qrobust::PauliAxis::Y:
        m << 0, cd(0, -1), cd(0, 1), 0;
        break;
    case qrobust::PauliAxis::Z:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

/// exp(-i angle P / 2) by matrix exponential.
inline Matrix rotation(qrobust::PauliAxis axis, double angle) {
    const Matrix generator = cd(0.0, -0.5 * angle) * pauli(axis);
    return generator.exp();
}

/// Kron of I_{2^qubit}, op, I_{2^(n - qubit - 1)}; qubit 0 is the leftmost factor.
inline Matrix embed(const Matrix &op, std::size_t qubit, std::size_t num_qubits) {
    const auto left = static_cast<Eigen::Index>(std::size_t{1} << qubit);
    const auto right = static_cast<Eigen::Index>(std::size_t{1} << (num_qubits - qubit - 1));
    const Matrix tmp = Eigen::kroneckerProduct(Matrix::Identity(left, left), op).eval();
    return Eigen::kroneckerProduct(tmp, Matrix::Identity(right, right)).eval();
}

/// |0><0|_c (x) I + |1><1|_c (x) X_t
inline Matrix cnot(std::size_t control, std::size_t target, std::size_t num_qubits) {
    Matrix p0(2, 2);
    p0 << 1, 0, 0, 0;
    Matrix p1(2, 2);
    p1 << 0, 0, 0, 1;
    const Matrix x = pauli(qrobust::PauliAxis::X);
    const Matrix i_part = embed(p0, control, num_qubits);
    const Matrix x_part = embed(p1, control, num_qubits) * embed(x, target, num_qubits);
    return i_part + x_part;
}

inline Matrix pauli_string(const qrobust::PauliStringObservable &obs) {
    Matrix m = Matrix::Identity(1, 1);
    for (const auto axis : obs.factors()) {
        m = Eigen::kroneckerProduct(m, pauli(axis)).eval();
    }
    return m;
}

inline Vector to_vector(const qrobust::StateVector &state) {
    Vector v(static_cast<Eigen::Index>(state.dimension()));
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        v(static_cast<Eigen::Index>(i)) = state[i];
    }
    return v;
}

inline Vector zero_state(std::size_t num_qubits) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << num_qubits));
    v(0) = 1.0;
    return v;
}

inline double expectation(const Vector &psi, const Matrix &observable) {
    return (psi.adjoint() * observable * psi)(0, 0).real();
}

/// Matrices of every op of a layout, with the given encoding angles.
inline std::vector<Matrix> op_matrices(const qrobust::CircuitLayout &layout,
                                       std::span<const double> angles) {
    std::vector<Matrix> out;
    std::size_t k = 0;
    const auto n = layout.num_qubits();
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<qrobust::EncodingGate>(&op)) {
            out.push_back(embed(rotation(gate->axis, angles[k++]), gate->qubit, n));
        } else {
            const auto &c = std::get<qrobust::CnotGate>(op);
            out.push_back(cnot(c.control, c.target, n));
        }
    }
    return out;
}

inline Matrix circuit_unitary(const qrobust::CircuitLayout &layout,
                              std::span<const double> angles) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << layout.num_qubits());
    Matrix u = Matrix::Identity(dim, dim);
    for (const auto &m : op_matrices(layout, angles)) {
        u = (m * u).eval();
    }
    return u;
}

/// f = <0|U^dag M U|0>
inline double model_output(const qrobust::CircuitLayout &layout, std::span<const double> angles) {
    const Vector psi = circuit_unitary(layout, angles) * zero_state(layout.num_qubits());
    return expectation(psi, pauli_string(layout.observable()));
}

/**
 * df/dangle_k by explicit matrix calculus: with U = U_N ... U_k ... U_1 and
 * dU_k/da = (-i/2) P_k U_k, df/da_k = 2 Re <0| U^dag M dU/da_k |0>.
 */
inline std::vector<double> angle_gradient(const qrobust::CircuitLayout &layout,
                                          std::span<const double> angles) {
    const auto mats = op_matrices(layout, angles);
    const auto n = layout.num_qubits();
    const Matrix m = pauli_string(layout.observable());
    const Vector zero = zero_state(n);
    const Vector psi = circuit_unitary(layout, angles) * zero;

    std::vector<double> grad;
    std::size_t op_index = 0;
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<qrobust::EncodingGate>(&op)) {
            const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
            Matrix d = Matrix::Identity(dim, dim);
            for (std::size_t j = 0; j < mats.size(); ++j) {
                if (j == op_index) {
                    const Matrix dgate =
                        cd(0.0, -0.5) * embed(pauli(gate->axis), gate->qubit, n) * mats[j];
                    d = (dgate * d).eval();
                } else {
                    d = (mats[j] * d).eval();
                }
            }
            const cd value = (psi.adjoint() * m * d * zero)(0, 0);
            grad.push_back(2.0 * value.real());
        }
        ++op_index;
    }
    return grad;
}

} // namespace oracle
