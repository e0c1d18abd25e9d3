#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nhqc/linalg.hpp"

namespace nhqc {

/// Ordered orthonormal basis of a subspace. Column `a` of `vectors` is the
/// state labelled `labels[a]`.
struct SubspaceFrame {
    std::vector<std::string> labels;
    ComplexMatrix vectors;

    Eigen::Index ambient_dim() const { return vectors.rows(); }
    Eigen::Index size() const { return vectors.cols(); }

    /// Largest entrywise deviation of the Gram matrix from the identity.
    double gram_defect() const {
        return max_abs(vectors.adjoint() * vectors - ComplexMatrix::Identity(size(), size()));
    }

    ComplexMatrix projector() const { return vectors * vectors.adjoint(); }
};

inline void require_orthonormal(const SubspaceFrame& frame, double tolerance = tol::gate) {
    if (frame.size() == 0) {
        throw PreconditionError("frame is empty");
    }
    if (static_cast<Eigen::Index>(frame.labels.size()) != frame.size()) {
        throw PreconditionError("frame has " + std::to_string(frame.labels.size()) +
                                " labels for " + std::to_string(frame.size()) + " vectors");
    }
    const double defect = frame.gram_defect();
    if (defect > tolerance) {
        throw PreconditionError("frame is not orthonormal (Gram deviation " +
                                std::to_string(defect) + ")");
    }
}

/// Matrix elements <f_a| U |f_b> in frame order.
inline ComplexMatrix project_onto(const ComplexMatrix& u, const SubspaceFrame& frame) {
    require_orthonormal(frame);
    if (u.rows() != frame.ambient_dim() || u.cols() != frame.ambient_dim()) {
        throw PreconditionError("project_onto: operator is " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + " but frame lives in dimension " +
                                std::to_string(frame.ambient_dim()));
    }
    return frame.vectors.adjoint() * u * frame.vectors;
}

/// Re-expresses `inner` (a frame inside the span of `outer`) in the
/// coordinates of `outer`. Used to carry a logical frame into an effective
/// Hamiltonian's basis.
inline SubspaceFrame coordinates_in(const SubspaceFrame& inner, const SubspaceFrame& outer) {
    require_orthonormal(inner);
    require_orthonormal(outer);
    if (inner.ambient_dim() != outer.ambient_dim()) {
        throw PreconditionError("coordinates_in: frames live in different spaces");
    }
    SubspaceFrame out{inner.labels, outer.vectors.adjoint() * inner.vectors};
    if (out.gram_defect() > tol::gate) {
        throw PreconditionError("coordinates_in: inner frame is not contained in outer frame");
    }
    return out;
}

} // namespace nhqc
