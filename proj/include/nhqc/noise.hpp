#pragma once

// Robustness of the holonomic gates against coherent Dzyaloshinskii-Moriya
// (z component) couplings, and the ratio grids behind the fidelity surfaces.

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "nhqc/holonomy.hpp"
#include "nhqc/linalg.hpp"
#include "nhqc/spin_model.hpp"

namespace nhqc {

/// Average state fidelity over the logical subspace,
/// F = (|tr(V^dagger U)|^2 + tr(U^dagger U)) / (k (k + 1)),
/// where U may be a leaky (sub-unitary) projection of the real evolution.
inline double gate_fidelity(const ComplexMatrix& ideal, const ComplexMatrix& actual) {
    if (ideal.rows() != actual.rows() || ideal.cols() != actual.cols() ||
        ideal.rows() != ideal.cols() || ideal.rows() == 0) {
        throw PreconditionError("gate_fidelity: dimension mismatch");
    }
    const double opnorm = singular_values(actual).maxCoeff();
    if (opnorm > 1.0 + 1e-9) {
        throw PreconditionError("gate_fidelity: projected evolution has operator norm " +
                                std::to_string(opnorm) + " > 1");
    }
    const double k = static_cast<double>(ideal.rows());
    const double overlap = std::norm((ideal.adjoint() * actual).trace());
    const double purity = (actual.adjoint() * actual).trace().real();
    return (overlap + purity) / (k * (k + 1.0));
}

struct PerturbedReport {
    /// Evolution projected on the logical frame; analytic_distance is set.
    GateReport gate;
    double fidelity = 0.0;
    /// Mean population leaving the fixed-excitation DFS (zero by symmetry).
    double sector_leakage = 0.0;
};

namespace detail {

inline double coefficient_for_ratio(double scale, double ratio) {
    if (!(ratio > 0.0)) {
        throw PreconditionError("noise ratio must be positive");
    }
    return std::isinf(ratio) ? 0.0 : scale / ratio;
}

inline double sector_leakage(const ComplexMatrix& evolution, const SubspaceFrame& logical,
                             const SubspaceFrame& sector) {
    const ComplexMatrix inside = sector.vectors.adjoint() * evolution * logical.vectors;
    const double kept = inside.squaredNorm() / static_cast<double>(logical.size());
    return std::clamp(1.0 - kept, 0.0, 1.0);
}

inline PerturbedReport perturbed_run(const ComplexMatrix& h, const SubspaceFrame& logical,
                                     const SubspaceFrame& sector, double tau,
                                     const ComplexMatrix& ideal) {
    PerturbedReport out;
    out.gate = evolve_and_project(h, logical, tau, 2, ideal);
    out.fidelity = gate_fidelity(ideal, out.gate.holonomy);
    out.sector_leakage = sector_leakage(expm_hermitian(h, tau), logical, sector);
    return out;
}

} // namespace detail

/// Runs the single-qubit loop with D1a = omega / d1_ratio and D2a = omega / d2_ratio
/// for the unperturbed duration. An infinite ratio switches the term off.
inline PerturbedReport perturbed_gate_1q(const GateParams1Q& g, double d1_ratio,
                                         double d2_ratio) {
    validate(g);
    CouplingParams1Q p = g.couplings();
    p.d1a_z = detail::coefficient_for_ratio(g.omega, d1_ratio);
    p.d2a_z = detail::coefficient_for_ratio(g.omega, d2_ratio);
    return detail::perturbed_run(build_h1(p), logical_frame_1q(), dfs_frame(3, 1),
                                 g.duration(), analytic_gate_1q(g.theta, g.gamma()));
}

/// Two-qubit counterpart with D32 = omega~ / d32_ratio, D42 = omega~ / d42_ratio.
inline PerturbedReport perturbed_gate_2q(const GateParams2Q& g, double d32_ratio,
                                         double d42_ratio) {
    validate(g);
    CouplingParams2Q p = g.couplings();
    p.d32_z = detail::coefficient_for_ratio(g.omega_tilde, d32_ratio);
    p.d42_z = detail::coefficient_for_ratio(g.omega_tilde, d42_ratio);
    return detail::perturbed_run(build_h2(p), logical_frame_2q(), dfs_frame(4, 2),
                                 g.duration(), analytic_gate_2q(g.theta_tilde));
}

struct GateTarget {
    enum class Kind { hadamard, pi8, custom, two_qubit };
    Kind kind = Kind::hadamard;
    double theta = 0.0;
    double gamma = 0.0;
    double theta_tilde = 0.0;

    static GateTarget hadamard() { return {Kind::hadamard, 3.0 * kPi / 4.0, kPi, 0.0}; }
    static GateTarget pi8() { return {Kind::pi8, 0.0, kPi / 4.0, 0.0}; }
    static GateTarget custom(double theta, double gamma) {
        return {Kind::custom, theta, gamma, 0.0};
    }
    static GateTarget two_qubit(double theta_tilde) {
        return {Kind::two_qubit, 0.0, 0.0, theta_tilde};
    }
};

struct SweepSpec {
    GateTarget target = GateTarget::hadamard();
    double ratio_min = 1.0;
    double ratio_max = 100.0;
    int steps_per_axis = 50;
    bool log_scale = true;
    /// Winding for the loop (m or m~).
    int winding = 1;
    /// Worker threads; results do not depend on this.
    unsigned threads = 1;
};

struct SweepTable {
    std::vector<double> axis1;
    std::vector<double> axis2;
    /// Row i corresponds to axis1[i], column j to axis2[j].
    Eigen::MatrixXd fidelity;
    Eigen::MatrixXd leakage;
};

inline void validate(const SweepSpec& spec) {
    if (!(spec.ratio_min > 0.0) || !std::isfinite(spec.ratio_min)) {
        throw PreconditionError("ratio minimum must be positive and finite");
    }
    if (!(spec.ratio_max >= spec.ratio_min) || !std::isfinite(spec.ratio_max)) {
        throw PreconditionError("ratio maximum must be finite and >= the minimum");
    }
    if (spec.steps_per_axis < 2) {
        throw PreconditionError("steps per axis must be >= 2");
    }
    if (spec.winding < 1) {
        throw PreconditionError("winding must be a positive integer");
    }
}

inline std::vector<double> ratio_axis(const SweepSpec& spec) {
    std::vector<double> axis(static_cast<std::size_t>(spec.steps_per_axis));
    const double last = static_cast<double>(spec.steps_per_axis - 1);
    for (int i = 0; i < spec.steps_per_axis; ++i) {
        const double f = static_cast<double>(i) / last;
        axis[static_cast<std::size_t>(i)] =
            spec.log_scale
                ? std::exp(std::log(spec.ratio_min) +
                           f * (std::log(spec.ratio_max) - std::log(spec.ratio_min)))
                : spec.ratio_min + f * (spec.ratio_max - spec.ratio_min);
    }
    axis.front() = spec.ratio_min;
    axis.back() = spec.ratio_max;
    return axis;
}

/// One grid point of a sweep for the given target.
inline PerturbedReport perturbed_gate(const GateTarget& target, int winding, double r1,
                                      double r2) {
    if (target.kind == GateTarget::Kind::two_qubit) {
        return perturbed_gate_2q(params_for_entangler(target.theta_tilde, winding), r1, r2);
    }
    return perturbed_gate_1q(params_for_rotation(target.theta, target.gamma, winding), r1, r2);
}

inline SweepTable run_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepTable table;
    table.axis1 = ratio_axis(spec);
    table.axis2 = table.axis1;
    const auto n = static_cast<Eigen::Index>(table.axis1.size());
    table.fidelity.resize(n, n);
    table.leakage.resize(n, n);

    // Fail fast on an unreachable target before fanning out.
    (void)perturbed_gate(spec.target, spec.winding, table.axis1.front(), table.axis2.front());

    auto fill_rows = [&](Eigen::Index first, Eigen::Index stride) {
        for (Eigen::Index i = first; i < n; i += stride) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const PerturbedReport r =
                    perturbed_gate(spec.target, spec.winding, table.axis1[static_cast<std::size_t>(i)],
                                   table.axis2[static_cast<std::size_t>(j)]);
                table.fidelity(i, j) = r.fidelity;
                table.leakage(i, j) = r.sector_leakage;
            }
        }
    };

    const auto workers = static_cast<Eigen::Index>(std::max(1u, spec.threads));
    if (workers == 1) {
        fill_rows(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (Eigen::Index w = 0; w < workers; ++w) {
            pool.emplace_back(fill_rows, w, workers);
        }
    }
    return table;
}

} // namespace nhqc
