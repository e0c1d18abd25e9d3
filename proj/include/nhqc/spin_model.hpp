#pragma once

// XY-coupled qubit registers: Pauli strings, the single- and two-logical-qubit
// Hamiltonians (with optional Dzyaloshinskii-Moriya z terms), the conserved
// total sigma_z, and fixed-excitation decoherence-free frames.
//
// Qubit slot 0 is the leftmost character of a bit-string label and the most
// significant bit of the basis index. sigma_z |0> = +|0>.
//   3-qubit register: slots (Q1, Qa, Q2)
//   4-qubit register: slots (Q1, Q2, Q3, Q4)

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "nhqc/linalg.hpp"
#include "nhqc/subspace_frame.hpp"

namespace nhqc {

enum class Axis { x, y, z };

inline constexpr int kMaxQubits = 10;

/// Couplings of the three-qubit chain Q1 - Qa - Q2 in a local field on Q1, Q2.
struct CouplingParams1Q {
    double j1a = 0.0;
    double j2a = 0.0;
    double b = 0.0;
    double d1a_z = 0.0;
    double d2a_z = 0.0;

    double omega() const { return std::sqrt(j1a * j1a + j2a * j2a + b * b); }
};

/// Couplings of Q3 - Q2 - Q4 bridging two logical qubits.
struct CouplingParams2Q {
    double j32 = 0.0;
    double j42 = 0.0;
    double d32_z = 0.0;
    double d42_z = 0.0;

    double omega() const { return std::sqrt(j32 * j32 + j42 * j42); }
};

inline ComplexMatrix pauli(Axis axis) {
    ComplexMatrix s(2, 2);
    switch (axis) {
    case Axis::x: s << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::y: s << 0.0, -kI, kI, 0.0; break;
    case Axis::z: s << 1.0, 0.0, 0.0, -1.0; break;
    }
    return s;
}

inline void require_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw PreconditionError("qubit count " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
    }
}

/// I (x) ... (x) sigma_axis (x) ... (x) I with sigma in slot j of n.
inline ComplexMatrix pauli_on(int n, int j, Axis axis) {
    require_qubit_count(n);
    if (j < 0 || j >= n) {
        throw PreconditionError("site index " + std::to_string(j) + " out of range for " +
                                std::to_string(n) + " qubits");
    }
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int slot = 0; slot < n; ++slot) {
        out = kron(out, slot == j ? pauli(axis) : ComplexMatrix::Identity(2, 2));
    }
    return out;
}

/// (J/2)(sx_i sx_j + sy_i sy_j)
inline ComplexMatrix xy_exchange(int n, int i, int j, double coupling) {
    return 0.5 * coupling *
           (pauli_on(n, i, Axis::x) * pauli_on(n, j, Axis::x) +
            pauli_on(n, i, Axis::y) * pauli_on(n, j, Axis::y));
}

/// (D/2)(sx_i sy_j - sy_i sx_j); operand order matters, the term is odd under i <-> j.
inline ComplexMatrix dm_z_term(int n, int i, int j, double coefficient) {
    return 0.5 * coefficient *
           (pauli_on(n, i, Axis::x) * pauli_on(n, j, Axis::y) -
            pauli_on(n, i, Axis::y) * pauli_on(n, j, Axis::x));
}

inline ComplexMatrix total_sz(int n) {
    require_qubit_count(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        out(s, s) = static_cast<double>(n - 2 * std::popcount(static_cast<std::uint32_t>(s)));
    }
    return out;
}

/// Single-logical-qubit Hamiltonian on (Q1, Qa, Q2), 8x8.
inline ComplexMatrix build_h1(const CouplingParams1Q& p) {
    constexpr int n = 3;
    constexpr int q1 = 0, qa = 1, q2 = 2;
    ComplexMatrix h = xy_exchange(n, q1, qa, p.j1a) + xy_exchange(n, qa, q2, p.j2a) +
                      p.b * (pauli_on(n, q1, Axis::z) + pauli_on(n, q2, Axis::z));
    if (p.d1a_z != 0.0) {
        h += dm_z_term(n, q1, qa, p.d1a_z);
    }
    if (p.d2a_z != 0.0) {
        h += dm_z_term(n, qa, q2, p.d2a_z);
    }
    return h;
}

/// Two-logical-qubit coupling Hamiltonian on (Q1, Q2, Q3, Q4), 16x16.
inline ComplexMatrix build_h2(const CouplingParams2Q& p) {
    constexpr int n = 4;
    constexpr int q2 = 1, q3 = 2, q4 = 3;
    ComplexMatrix h = xy_exchange(n, q3, q2, p.j32) + xy_exchange(n, q4, q2, p.j42);
    if (p.d32_z != 0.0) {
        h += dm_z_term(n, q3, q2, p.d32_z);
    }
    if (p.d42_z != 0.0) {
        h += dm_z_term(n, q2, q4, p.d42_z);
    }
    return h;
}

inline std::string bit_label(std::uint32_t index, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int slot = 0; slot < n; ++slot) {
        if (index & (1u << (n - 1 - slot))) {
            s[static_cast<std::size_t>(slot)] = '1';
        }
    }
    return s;
}

inline std::uint32_t bit_index(const std::string& label) {
    std::uint32_t index = 0;
    for (char c : label) {
        if (c != '0' && c != '1') {
            throw PreconditionError("bit-string label '" + label + "' contains '" +
                                    std::string(1, c) + "'");
        }
        index = (index << 1) | static_cast<std::uint32_t>(c == '1');
    }
    return index;
}

/// Frame of computational basis states with the given labels, in the given order.
inline SubspaceFrame computational_frame(const std::vector<std::string>& labels) {
    if (labels.empty()) {
        throw PreconditionError("computational_frame: no labels");
    }
    const int n = static_cast<int>(labels.front().size());
    require_qubit_count(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    SubspaceFrame frame{labels, ComplexMatrix::Zero(dim, static_cast<Eigen::Index>(labels.size()))};
    for (std::size_t a = 0; a < labels.size(); ++a) {
        if (static_cast<int>(labels[a].size()) != n) {
            throw PreconditionError("computational_frame: mixed label lengths");
        }
        frame.vectors(bit_index(labels[a]), static_cast<Eigen::Index>(a)) = 1.0;
    }
    require_orthonormal(frame, tol::construction);
    return frame;
}

/// All basis states of n qubits carrying `excitations` ones. The orderings the
/// effective Hamiltonians are written in are kept for (3,1) and (4,2);
/// everything else is lexicographic.
inline SubspaceFrame dfs_frame(int n, int excitations) {
    require_qubit_count(n);
    if (excitations < 0 || excitations > n) {
        throw PreconditionError("excitation count " + std::to_string(excitations) +
                                " outside [0, " + std::to_string(n) + "]");
    }
    if (n == 3 && excitations == 1) {
        return computational_frame({"001", "100", "010"});
    }
    if (n == 4 && excitations == 2) {
        return computational_frame({"0101", "1010", "0110", "1001", "0011", "1100"});
    }
    std::vector<std::string> labels;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        if (std::popcount(s) == excitations) {
            labels.push_back(bit_label(s, n));
        }
    }
    return computational_frame(labels);
}

/// Logical qubit |0_L> = |001>, |1_L> = |100> inside the three-qubit register.
inline SubspaceFrame logical_frame_1q() { return computational_frame({"001", "100"}); }

/// |0_L 0_L>, |0_L 1_L>, |1_L 0_L>, |1_L 1_L> inside the four-qubit register.
inline SubspaceFrame logical_frame_2q() {
    return computational_frame({"0101", "0110", "1001", "1010"});
}

struct RestrictedOperator {
    ComplexMatrix effective;
    /// ||(1 - P) H P||_F; zero iff the frame spans an invariant subspace.
    double invariance_residual = 0.0;
};

inline RestrictedOperator restrict_to(const ComplexMatrix& h, const SubspaceFrame& frame) {
    RestrictedOperator out;
    out.effective = project_onto(h, frame);
    const ComplexMatrix image = h * frame.vectors;
    out.invariance_residual = (image - frame.vectors * out.effective).norm();
    return out;
}

} // namespace nhqc
