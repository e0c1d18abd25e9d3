#pragma once

// Nonadiabatic holonomic gates from lambda (one logical qubit) and double-lambda
// (two logical qubits) evolutions: closed-form gates, control-parameter
// synthesis, and numerical verification of cyclicity and parallel transport.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "nhqc/linalg.hpp"
#include "nhqc/spin_model.hpp"
#include "nhqc/subspace_frame.hpp"

namespace nhqc {

/// Control parameters of one single-qubit loop. Couplings follow
/// (J1a, J2a, B) = omega (sin phi cos theta/2, sin phi sin theta/2, cos phi)
/// and the loop closes at omega tau = m pi.
struct GateParams1Q {
    double theta = 0.0;
    double phi = 0.0;
    int m = 1;
    double omega = 1.0;

    CouplingParams1Q couplings() const {
        return {omega * std::sin(phi) * std::cos(theta / 2.0),
                omega * std::sin(phi) * std::sin(theta / 2.0), omega * std::cos(phi), 0.0, 0.0};
    }
    double duration() const { return m * kPi / omega; }
    /// Rotation angle of the resulting gate, m pi (cos phi + 1).
    double gamma() const { return m * kPi * (std::cos(phi) + 1.0); }
};

/// Control parameters of the two-qubit loop: (J32, J42) = omega~ (sin, cos)(theta~/2),
/// closing at omega~ tau~ = m~ pi with m~ odd.
struct GateParams2Q {
    double theta_tilde = kPi / 4.0;
    int m_tilde = 1;
    double omega_tilde = 1.0;

    CouplingParams2Q couplings() const {
        return {omega_tilde * std::sin(theta_tilde / 2.0),
                omega_tilde * std::cos(theta_tilde / 2.0), 0.0, 0.0};
    }
    double duration() const { return m_tilde * kPi / omega_tilde; }
};

inline void validate(const GateParams1Q& g) {
    if (!(g.theta >= 0.0 && g.theta <= kPi)) {
        throw PreconditionError("theta must lie in [0, pi]");
    }
    if (!(g.phi >= 0.0 && g.phi <= kPi)) {
        throw PreconditionError("phi must lie in [0, pi]");
    }
    if (g.m < 1) {
        throw PreconditionError("winding m must be a positive integer");
    }
    if (!(g.omega > 0.0) || !std::isfinite(g.omega)) {
        throw PreconditionError("omega must be positive and finite");
    }
}

inline void validate(const GateParams2Q& g) {
    if (!(g.theta_tilde > 0.0 && g.theta_tilde < kPi / 2.0)) {
        throw PreconditionError("theta-tilde must lie in (0, pi/2)");
    }
    if (g.m_tilde < 1 || g.m_tilde % 2 == 0) {
        throw PreconditionError("winding m-tilde must be a positive odd integer; even windings "
                                "return the logical space to the identity");
    }
    if (!(g.omega_tilde > 0.0) || !std::isfinite(g.omega_tilde)) {
        throw PreconditionError("omega-tilde must be positive and finite");
    }
}

/// Verification record of one evolve-and-project run.
struct GateReport {
    ComplexMatrix holonomy;
    /// ||U~^dagger U~ - 1||_F of the projected final evolution.
    double cyclicity_residual = 0.0;
    /// max over sampled t and logical x, y of |<x| U(t)^dagger H U(t) |y>|.
    double max_dynamical_norm = 0.0;
    /// Mean population leaving the logical frame by the final time.
    double leakage = 0.0;
    /// Phase-invariant distance to the closed-form gate, when one was supplied.
    std::optional<double> analytic_distance;
};

/// Effective lambda Hamiltonian in the ordered basis {|0_L>, |1_L>, |a>}.
inline ComplexMatrix lambda_hamiltonian(const CouplingParams1Q& p) {
    ComplexMatrix h(3, 3);
    h << 0.0, 0.0, p.j2a,
         0.0, 0.0, p.j1a,
         p.j2a, p.j1a, 2.0 * p.b;
    return h;
}

/// 3x3 factor of the double-lambda Hamiltonian; the full 6x6 form is this
/// matrix tensored with the 2x2 identity.
inline ComplexMatrix double_lambda_factor(const CouplingParams2Q& p) {
    ComplexMatrix h(3, 3);
    h << 0.0, 0.0, p.j32,
         0.0, 0.0, p.j42,
         p.j32, p.j42, 0.0;
    return h;
}

/// exp(-i H_eff t) for the lambda system, built from its dark/bright
/// eigenbasis rather than a generic eigensolver.
inline ComplexMatrix analytic_u_tau(const GateParams1Q& g, double t) {
    if (t < 0.0) {
        throw PreconditionError("analytic_u_tau: t must be non-negative");
    }
    const double ch = std::cos(g.theta / 2.0), sh = std::sin(g.theta / 2.0);
    const double cp = std::cos(g.phi / 2.0), sp = std::sin(g.phi / 2.0);
    StateVector dark(3), bright(3), ancilla(3);
    dark << ch, -sh, 0.0;
    bright << sh, ch, 0.0;
    ancilla << 0.0, 0.0, 1.0;
    const StateVector b1 = cp * ancilla + sp * bright;
    const StateVector b2 = sp * ancilla - cp * bright;
    const double e1 = g.omega * (std::cos(g.phi) + 1.0);
    const double e2 = g.omega * (std::cos(g.phi) - 1.0);
    return dark * dark.adjoint() + std::exp(-kI * e1 * t) * b1 * b1.adjoint() +
           std::exp(-kI * e2 * t) * b2 * b2.adjoint();
}

/// e^{-i gamma/2} [cos(gamma/2) 1 - i sin(gamma/2)(sin theta X - cos theta Z)],
/// a rotation by gamma about n = (sin theta, 0, -cos theta).
inline ComplexMatrix analytic_gate_1q(double theta, double gamma) {
    const ComplexMatrix n_sigma =
        std::sin(theta) * pauli(Axis::x) - std::cos(theta) * pauli(Axis::z);
    return std::exp(-kI * gamma / 2.0) *
           (std::cos(gamma / 2.0) * ComplexMatrix::Identity(2, 2) -
            kI * std::sin(gamma / 2.0) * n_sigma);
}

/// Conditional pi rotation in the basis {|0_L0_L>, |0_L1_L>, |1_L0_L>, |1_L1_L>}.
inline ComplexMatrix analytic_gate_2q(double theta_tilde) {
    const double c = std::cos(theta_tilde), s = std::sin(theta_tilde);
    ComplexMatrix u(4, 4);
    u << c, -s, 0.0, 0.0,
         -s, -c, 0.0, 0.0,
         0.0, 0.0, -c, -s,
         0.0, 0.0, -s, c;
    return u;
}

/// Parameters realizing a rotation by gamma about (sin theta, 0, -cos theta)
/// with winding m: cos phi = gamma / (m pi) - 1. An axis outside the
/// theta in [0, pi] half-plane is reached through R_{-n}(gamma) = R_n(-gamma)
/// by the caller.
inline GateParams1Q params_for_rotation(double theta, double gamma, int m, double omega = 1.0) {
    if (m < 1) {
        throw PreconditionError("winding m must be a positive integer");
    }
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw PreconditionError("theta must lie in [0, pi]");
    }
    if (!(gamma >= 0.0)) {
        throw PreconditionError("gamma must be non-negative; use the opposite axis for "
                                "negative rotations");
    }
    const double reach = 2.0 * m * kPi;
    if (gamma > reach * (1.0 + 1e-14)) {
        const int minimal = static_cast<int>(std::ceil(gamma / (2.0 * kPi) - 1e-14));
        throw PreconditionError("gamma exceeds 2*m*pi for m=" + std::to_string(m) +
                                "; minimal feasible m is " + std::to_string(minimal));
    }
    const double cos_phi = std::clamp(gamma / (m * kPi) - 1.0, -1.0, 1.0);
    GateParams1Q g{theta, std::acos(cos_phi), m, omega};
    validate(g);
    return g;
}

inline GateParams2Q params_for_entangler(double theta_tilde, int m_tilde = 1,
                                         double omega_tilde = 1.0) {
    GateParams2Q g{theta_tilde, m_tilde, omega_tilde};
    validate(g);
    return g;
}

/// Evolves the frame under time-independent H for time tau, sampling
/// `samples` equally spaced instants in [0, tau] for the parallel-transport
/// check, and projects the final evolution operator onto the frame.
inline GateReport evolve_and_project(const ComplexMatrix& h, const SubspaceFrame& logical,
                                     double tau, int samples = 101) {
    if (samples < 2) {
        throw PreconditionError("evolve_and_project: samples must be >= 2");
    }
    require_orthonormal(logical);
    if (h.rows() != logical.ambient_dim()) {
        throw PreconditionError("evolve_and_project: Hamiltonian dimension " +
                                std::to_string(h.rows()) + " does not match frame dimension " +
                                std::to_string(logical.ambient_dim()));
    }
    const EigenSystem spectrum = eigh(h);
    const Eigen::Index k = logical.size();

    GateReport report;
    for (int s = 0; s < samples; ++s) {
        const double t = tau * static_cast<double>(s) / static_cast<double>(samples - 1);
        const ComplexMatrix evolved = evolution_from(spectrum, t) * logical.vectors;
        const ComplexMatrix dynamical = evolved.adjoint() * h * evolved;
        report.max_dynamical_norm = std::max(report.max_dynamical_norm, max_abs(dynamical));
    }

    const ComplexMatrix final_u = evolution_from(spectrum, tau);
    report.holonomy = project_onto(final_u, logical);
    const ComplexMatrix gram = report.holonomy.adjoint() * report.holonomy;
    report.cyclicity_residual = (gram - ComplexMatrix::Identity(k, k)).norm();
    report.leakage = std::clamp(1.0 - gram.trace().real() / static_cast<double>(k), 0.0, 1.0);
    return report;
}

/// evolve_and_project plus the phase-invariant distance to `reference`.
inline GateReport evolve_and_project(const ComplexMatrix& h, const SubspaceFrame& logical,
                                     double tau, int samples, const ComplexMatrix& reference) {
    GateReport report = evolve_and_project(h, logical, tau, samples);
    report.analytic_distance = phase_invariant_distance(report.holonomy, reference);
    return report;
}

/// Wilson-line estimate of the holonomy of the subspace path t -> U(t) W.
///
/// The frame is carried through `steps` short-time evolutions; successive
/// overlaps X_{j+1}^dagger X_j are unitarized by polar decomposition and
/// multiplied in path order, and the loop is closed by the overlap of the
/// initial frame with the final one. The result is purely geometric: any
/// dynamical phase cancels against the closing overlap, so it agrees with the
/// projected evolution only when the dynamical block vanishes.
inline ComplexMatrix discretized_holonomy(const ComplexMatrix& h, const SubspaceFrame& frame,
                                          double tau, int steps) {
    if (steps < 100) {
        throw PreconditionError("discretized_holonomy: steps must be >= 100");
    }
    require_orthonormal(frame);
    if (h.rows() != frame.ambient_dim()) {
        throw PreconditionError("discretized_holonomy: Hamiltonian/frame dimension mismatch");
    }
    const ComplexMatrix step = expm_hermitian(h, tau / static_cast<double>(steps));
    const Eigen::Index k = frame.size();

    ComplexMatrix wilson = ComplexMatrix::Identity(k, k);
    ComplexMatrix current = frame.vectors;
    for (int j = 0; j < steps; ++j) {
        ComplexMatrix next = step * current;
        const ComplexMatrix overlap = next.adjoint() * current;
        if (singular_values(overlap).minCoeff() < 0.5) {
            throw NumericalError("discretized_holonomy: overlap matrix lost rank at step " +
                                 std::to_string(j) + "; increase steps");
        }
        wilson = polar_unitary(overlap) * wilson;
        current = std::move(next);
    }
    const ComplexMatrix closing = frame.vectors.adjoint() * current;
    if (singular_values(closing).minCoeff() < 0.5) {
        throw NumericalError("discretized_holonomy: evolution is not cyclic; the final "
                             "subspace does not overlap the initial one");
    }
    return polar_unitary(closing) * wilson;
}

} // namespace nhqc
