#pragma once

// Two-qubit gate classification up to local operations.
//
// Magic basis (columns of Q):
//   (|00> + |11>)/sqrt2, (-i|00> + i|11>)/sqrt2, (|01> - |10>)/sqrt2, (-i|01> - i|10>)/sqrt2
// Weyl chamber: tetrahedron O=(0,0,0), A1=(pi,0,0), A2=(pi/2,pi/2,0),
// A3=(pi/2,pi/2,pi/2), i.e. c1 >= c2 >= c3 >= 0 and c1 + c2 <= pi, for
// U ~ exp(i/2 (c1 XX + c2 YY + c3 ZZ)). CNOT sits at L = (pi/2, 0, 0).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "nhqc/linalg.hpp"

namespace nhqc {

using WeylPoint = std::array<double, 3>;

struct LocalInvariants {
    cplx g1;
    double g2 = 0.0;
};

struct EntanglingPowerEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

struct EntanglementReport {
    LocalInvariants invariants;
    WeylPoint weyl{};
    /// Closed form (2/9)(1 - |G1|).
    double ep = 0.0;
    EntanglingPowerEstimate ep_mc;
    bool cnot_equivalent = false;
};

inline ComplexMatrix magic_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix q(4, 4);
    q << r, -kI * r, 0.0, 0.0,
         0.0, 0.0, r, -kI * r,
         0.0, 0.0, -r, -kI * r,
         r, kI * r, 0.0, 0.0;
    return q;
}

namespace detail {

inline void require_two_qubit_unitary(const ComplexMatrix& u, double tolerance) {
    if (u.rows() != 4 || u.cols() != 4) {
        throw PreconditionError("expected a 4x4 two-qubit unitary");
    }
    const double defect = unitarity_defect(u);
    if (defect > tolerance) {
        throw PreconditionError("matrix is not unitary (max |U^dagger U - 1| = " +
                                std::to_string(defect) + ")");
    }
}

// M = U_B^T U_B with U_B the magic-basis image of U.
inline ComplexMatrix magic_gram(const ComplexMatrix& u) {
    const ComplexMatrix q = magic_basis();
    const ComplexMatrix ub = q.adjoint() * u * q;
    return ub.transpose() * ub;
}

} // namespace detail

/// Makhlin invariants G1 = tr^2(M) / (16 det U), G2 = (tr^2(M) - tr(M^2)) / (4 det U).
inline LocalInvariants local_invariants(const ComplexMatrix& u, double tolerance = tol::gate) {
    detail::require_two_qubit_unitary(u, tolerance);
    const ComplexMatrix m = detail::magic_gram(u);
    const cplx det = u.determinant();
    const cplx tr = m.trace();
    const cplx tr_sq = (m * m).trace();
    return {tr * tr / (16.0 * det), ((tr * tr - tr_sq) / (4.0 * det)).real()};
}

/// Canonical Weyl-chamber point of U.
///
/// U is first scaled to det U = 1 with the principal fourth root. Off the base
/// plane c3 = 0 the point is a complete local invariant. On the base, the
/// mirror pair (c1, c2, 0) and (pi - c1, c2, 0) belong to the same class and
/// differ only in the sign of M's spectrum, i.e. in which fourth root of
/// det U was taken; the point reported is the one selected by the principal
/// root, so that SU(2) x SU(2) equivalent gates with equal determinant map to
/// one point. When det U sits on the branch cut (arg det = pi) the base point
/// is folded to c1 <= pi/2.
inline WeylPoint weyl_coordinates(const ComplexMatrix& u, double tolerance = tol::gate) {
    detail::require_two_qubit_unitary(u, tolerance);
    const cplx det = u.determinant();
    const ComplexMatrix normalized = u / std::pow(det, 0.25);
    const ComplexMatrix m = detail::magic_gram(normalized);

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("weyl_coordinates: eigensolver failed");
    }
    std::array<double, 4> phase{};
    for (int i = 0; i < 4; ++i) {
        phase[static_cast<std::size_t>(i)] = std::arg(solver.eigenvalues()(i));
    }

    // The spectrum is {c1-c2+c3, -c1+c2+c3, c1+c2-c3, -c1-c2-c3} modulo 2 pi.
    // Search assignments and branch lifts for the one inside the chamber or
    // its mirror image below the base plane.
    std::array<int, 4> perm{0, 1, 2, 3};
    double best_violation = std::numeric_limits<double>::infinity();
    WeylPoint best{};
    do {
        for (int code = 0; code < 81; ++code) {
            std::array<double, 4> p{};
            int rest = code;
            double sum = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                const int lift = rest % 3 - 1;
                rest /= 3;
                p[k] = phase[static_cast<std::size_t>(perm[k])] + 2.0 * kPi * lift;
                sum += p[k];
            }
            if (std::abs(sum) > 1e-8) {
                continue;
            }
            const WeylPoint c{(p[0] + p[2]) / 2.0, (p[1] + p[2]) / 2.0, (p[0] + p[1]) / 2.0};
            const double violation =
                std::max({0.0, c[1] - c[0], std::abs(c[2]) - c[1], c[0] + c[1] - kPi});
            if (violation < best_violation - 1e-12) {
                best_violation = violation;
                best = c;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (best_violation > 1e-6) {
        throw NumericalError("weyl_coordinates: eigenphases admit no chamber assignment "
                             "(violation " + std::to_string(best_violation) + ")");
    }

    constexpr double base_tol = 1e-9;
    if (best[2] < -base_tol) {
        best = {kPi - best[0], best[1], -best[2]};
    } else if (best[2] <= base_tol) {
        best[2] = 0.0;
        if (std::abs(std::abs(std::arg(det)) - kPi) < 1e-9 && best[0] > kPi / 2.0) {
            best[0] = kPi - best[0];
        }
    }
    for (double& c : best) {
        if (std::abs(c) < 1e-13) {
            c = 0.0;
        }
    }
    return best;
}

/// (2/9) sin^2(2 theta~) for the conditional-rotation family.
inline double entangling_power_analytic(double theta_tilde) {
    const double s = std::sin(2.0 * theta_tilde);
    return 2.0 / 9.0 * s * s;
}

/// (2/9)(1 - |G1|), valid for any two-qubit unitary.
inline double entangling_power_from_invariants(const LocalInvariants& inv) {
    return 2.0 / 9.0 * (1.0 - std::abs(inv.g1));
}

/// Haar-random single-qubit state from two independent complex Gaussians.
template <typename Engine>
StateVector haar_qubit(Engine& engine) {
    std::normal_distribution<double> normal(0.0, 1.0);
    StateVector psi(2);
    for (Eigen::Index i = 0; i < 2; ++i) {
        const double re = normal(engine);
        const double im = normal(engine);
        psi(i) = cplx{re, im};
    }
    return psi / psi.norm();
}

/// Linear entropy 1 - tr(rho_A^2) of the first qubit of a two-qubit pure state.
inline double linear_entropy(const StateVector& psi) {
    Eigen::Matrix2cd amplitudes;
    amplitudes << psi(0), psi(1), psi(2), psi(3);
    const Eigen::Matrix2cd rho = amplitudes * amplitudes.adjoint();
    return 1.0 - (rho * rho).trace().real();
}

/// Mean linear entropy U produces on Haar-random product inputs.
inline EntanglingPowerEstimate entangling_power_mc(const ComplexMatrix& u, std::int64_t samples,
                                                   std::uint64_t seed) {
    detail::require_two_qubit_unitary(u, 1e-8);
    if (samples < 1000) {
        throw PreconditionError("entangling_power_mc: samples must be >= 1000");
    }
    std::mt19937_64 engine(seed);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t n = 1; n <= samples; ++n) {
        const StateVector a = haar_qubit(engine);
        const StateVector b = haar_qubit(engine);
        StateVector product(4);
        product << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        const double e = linear_entropy(u * product);
        const double delta = e - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (e - mean);
    }
    const double variance = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

inline bool is_cnot_class(const ComplexMatrix& u, double tolerance = 1e-6) {
    const WeylPoint c = weyl_coordinates(u, 1e-8);
    const double d = std::hypot(c[0] - kPi / 2.0, c[1], c[2]);
    return d <= tolerance;
}

inline EntanglementReport classify(const ComplexMatrix& u, std::int64_t mc_samples,
                                   std::uint64_t seed, double cnot_tolerance = 1e-6) {
    EntanglementReport r;
    r.invariants = local_invariants(u, 1e-8);
    r.weyl = weyl_coordinates(u, 1e-8);
    r.ep = entangling_power_from_invariants(r.invariants);
    r.ep_mc = entangling_power_mc(u, mc_samples, seed);
    r.cnot_equivalent = std::hypot(r.weyl[0] - kPi / 2.0, r.weyl[1], r.weyl[2]) <= cnot_tolerance;
    return r;
}

} // namespace nhqc
