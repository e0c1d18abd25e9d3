#pragma once

// Dense complex linear algebra for the small (dimension <= 16) operators this
// library works with. Everything is a pure function of its arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "nhqc/errors.hpp"

namespace nhqc {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Tolerance ladder shared by the whole library.
namespace tol {
inline constexpr double construction = 1e-12;
inline constexpr double spectral = 1e-11;
inline constexpr double gate = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate cluster.
inline constexpr double degeneracy = 1e-9;
} // namespace tol

/// Ascending eigenvalues with orthonormal eigenvectors stored column-wise.
struct EigenSystem {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest entrywise deviation of `m` from its adjoint.
inline double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return max_abs(m - m.adjoint());
}

/// Largest entrywise deviation of `m`^dagger `m` from the identity.
inline double unitarity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return max_abs(m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols()));
}

inline bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::construction) {
    return hermiticity_defect(m) <= tolerance * std::max(1.0, max_abs(m));
}

inline bool is_unitary(const ComplexMatrix& m, double tolerance = tol::gate) {
    return unitarity_defect(m) <= tolerance;
}

namespace detail {

// Modified Gram-Schmidt on columns [first, last) of v, in place.
inline void orthonormalize_columns(ComplexMatrix& v, Eigen::Index first, Eigen::Index last) {
    for (Eigen::Index c = first; c < last; ++c) {
        for (Eigen::Index p = first; p < c; ++p) {
            v.col(c) -= v.col(p).dot(v.col(c)) * v.col(p);
        }
        v.col(c) /= v.col(c).norm();
    }
}

// Rotate the column so that its first non-negligible component is real and
// positive.
inline void fix_phase(Eigen::Ref<StateVector> column) {
    const double scale = column.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < column.size(); ++i) {
        const double a = std::abs(column(i));
        if (a > 1e-8 * scale) {
            column *= std::conj(column(i)) / a;
            column(i) = cplx{a, 0.0};
            return;
        }
    }
}

} // namespace detail

/// Full spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are ascending. Within each degenerate cluster the vectors are
/// re-orthonormalized, and every vector is phased so its first nonzero
/// component is real and positive; callers must not rely on the ordering
/// inside a cluster.
inline EigenSystem eigh(const ComplexMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw PreconditionError("eigh: matrix must be square and non-empty");
    }
    const double defect = hermiticity_defect(h);
    if (defect > tol::construction * std::max(1.0, max_abs(h))) {
        std::ostringstream msg;
        msg << "eigh: matrix is not Hermitian (max |H - H^dagger| = " << defect << ")";
        throw PreconditionError(msg.str());
    }
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigh: eigensolver did not converge");
    }
    EigenSystem out{solver.eigenvalues(), solver.eigenvectors()};

    const Eigen::Index n = out.eigenvalues.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && out.eigenvalues(end) - out.eigenvalues(end - 1) < tol::degeneracy) {
            ++end;
        }
        if (end - start > 1) {
            detail::orthonormalize_columns(out.eigenvectors, start, end);
        }
        start = end;
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        detail::fix_phase(out.eigenvectors.col(c));
    }
    return out;
}

/// exp(-i H t) assembled from an existing spectral decomposition.
inline ComplexMatrix evolution_from(const EigenSystem& es, double t) {
    StateVector phases(es.eigenvalues.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::exp(-kI * es.eigenvalues(i) * t);
    }
    return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

/// exp(-i H t) for Hermitian H (hbar = 1).
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
    return evolution_from(eigh(h), t);
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Frobenius distance between U and V minimized over a global phase. For
/// unitaries this is sqrt(2d - 2 |Tr(U^dagger V)|); it is evaluated as
/// ||U - e^{ia} V|| at the optimal phase so that tiny distances keep their
/// digits instead of drowning in the cancellation under the square root.
inline double phase_invariant_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
        throw PreconditionError("phase_invariant_distance: dimension mismatch");
    }
    const cplx overlap = (v.adjoint() * u).trace();
    const double magnitude = std::abs(overlap);
    const cplx phase = magnitude > 0.0 ? overlap / magnitude : cplx{1.0, 0.0};
    return (u - phase * v).norm();
}

/// Unitary factor W of the polar decomposition M = W P.
inline ComplexMatrix polar_unitary(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

inline RealVector singular_values(const ComplexMatrix& m) {
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

} // namespace nhqc
