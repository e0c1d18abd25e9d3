#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nhqc/entanglement.hpp"
#include "nhqc/holonomy.hpp"
#include "test_support.hpp"

using namespace nhqc;
namespace t = nhqc::testing;

namespace {

void expect_weyl(const WeylPoint& c, double c1, double c2, double c3, double tol) {
    EXPECT_NEAR(c[0], c1, tol);
    EXPECT_NEAR(c[1], c2, tol);
    EXPECT_NEAR(c[2], c3, tol);
}

bool in_chamber(const WeylPoint& c) {
    constexpr double eps = 1e-9;
    return c[0] >= c[1] - eps && c[1] >= c[2] - eps && c[2] >= -eps && c[0] + c[1] <= kPi + eps;
}

} // namespace

TEST(MagicBasis, IsUnitary) { EXPECT_LE(unitarity_defect(magic_basis()), 1e-15); }

TEST(MagicBasis, LocalGatesBecomeRealOrthogonal) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix q = magic_basis();
        const ComplexMatrix o = q.adjoint() * t::random_local(rng) * q;
        EXPECT_LE(o.imag().cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(LocalInvariants, Identity) {
    const LocalInvariants inv = local_invariants(ComplexMatrix::Identity(4, 4));
    EXPECT_NEAR(std::abs(inv.g1 - cplx{1.0, 0.0}), 0.0, 1e-14);
    EXPECT_NEAR(inv.g2, 3.0, 1e-14);
}

TEST(LocalInvariants, Swap) {
    const LocalInvariants inv = local_invariants(t::swap_gate());
    EXPECT_NEAR(std::abs(inv.g1 - cplx{-1.0, 0.0}), 0.0, 1e-14);
    EXPECT_NEAR(inv.g2, -3.0, 1e-14);
}

TEST(LocalInvariants, Cnot) {
    const LocalInvariants inv = local_invariants(t::cnot());
    EXPECT_NEAR(std::abs(inv.g1), 0.0, 1e-15);
    EXPECT_NEAR(inv.g2, 1.0, 1e-14);
}

TEST(LocalInvariants, EntanglerFamily) {
    for (int k = 1; k <= 20; ++k) {
        const double a = k * (kPi / 2.0) / 21.0;
        const LocalInvariants inv = local_invariants(analytic_gate_2q(a));
        EXPECT_NEAR(inv.g1.real(), std::pow(std::cos(2.0 * a), 2), 1e-9);
        EXPECT_NEAR(inv.g1.imag(), 0.0, 1e-9);
        EXPECT_NEAR(inv.g2, std::cos(4.0 * a) + 2.0, 1e-9);
    }
}

TEST(LocalInvariants, RejectsNonUnitaryAndWrongSize) {
    EXPECT_THROW((void)local_invariants(2.0 * ComplexMatrix::Identity(4, 4)), PreconditionError);
    EXPECT_THROW((void)local_invariants(ComplexMatrix::Identity(2, 2)), PreconditionError);
}

TEST(LocalInvariantsProperty, MatchCanonicalGateOracle) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double c1 = kPi * u(rng), c2 = kPi * u(rng) / 2.0, c3 = kPi * u(rng) / 2.0;
        const auto [g1, g2] = t::invariants_from_weyl(c1, c2, c3);
        const LocalInvariants inv = local_invariants(t::canonical_gate(c1, c2, c3), 1e-9);
        // The imaginary part's sign depends on orientation; compare the modulus and conjugate pair.
        EXPECT_NEAR(inv.g1.real(), g1.real(), 1e-9);
        EXPECT_NEAR(std::abs(inv.g1.imag()), std::abs(g1.imag()), 1e-9);
        EXPECT_NEAR(inv.g2, g2, 1e-9);
    }
}

TEST(LocalInvariantsProperty, InvariantUnderLocalUnitaries) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix u = analytic_gate_2q(angle(rng));
        // Full U(2) locals: the invariants divide out det U.
        const ComplexMatrix dressed = kron(t::random_unitary(2, rng), t::random_unitary(2, rng)) *
                                      u * kron(t::random_unitary(2, rng), t::random_unitary(2, rng));
        const LocalInvariants a = local_invariants(u), b = local_invariants(dressed, 1e-9);
        EXPECT_NEAR(std::abs(a.g1 - b.g1), 0.0, 1e-9);
        EXPECT_NEAR(a.g2, b.g2, 1e-9);
    }
}

TEST(WeylCoordinates, Identity) { expect_weyl(weyl_coordinates(ComplexMatrix::Identity(4, 4)), 0, 0, 0, 1e-12); }

TEST(WeylCoordinates, KnownGates) {
    expect_weyl(weyl_coordinates(t::cnot()), kPi / 2.0, 0.0, 0.0, 1e-9);
    expect_weyl(weyl_coordinates(t::swap_gate()), kPi / 2.0, kPi / 2.0, kPi / 2.0, 1e-9);
    expect_weyl(weyl_coordinates(analytic_gate_2q(kPi / 4.0)), kPi / 2.0, 0.0, 0.0, 1e-9);
}

TEST(WeylCoordinates, EntanglerFamilyCoversEdge) {
    for (int k = 1; k <= 20; ++k) {
        const double a = k * (kPi / 2.0) / 21.0;
        expect_weyl(weyl_coordinates(analytic_gate_2q(a)), 2.0 * a, 0.0, 0.0, 1e-8);
    }
}

TEST(WeylCoordinatesProperty, RecoversCanonicalInteriorPoints) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    int checked = 0;
    while (checked < 40) {
        const double c1 = kPi * u(rng), c2 = kPi / 2.0 * u(rng), c3 = kPi / 2.0 * u(rng);
        if (!(c1 > c2 + 0.01 && c2 > c3 + 0.01 && c1 + c2 < kPi - 0.01)) {
            continue;
        }
        ++checked;
        const ComplexMatrix g = t::canonical_gate(c1, c2, c3);
        const ComplexMatrix dressed = t::random_local(rng) * g * t::random_local(rng);
        expect_weyl(weyl_coordinates(dressed, 1e-9), c1, c2, c3, 1e-8);
    }
}

TEST(WeylCoordinatesProperty, LocallyEquivalentGatesShareAPoint) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.01, kPi / 2.0 - 0.01);
    for (int trial = 0; trial < 30; ++trial) {
        const ComplexMatrix u = analytic_gate_2q(angle(rng));
        const ComplexMatrix dressed = t::random_local(rng) * u * t::random_local(rng);
        const WeylPoint a = weyl_coordinates(u), b = weyl_coordinates(dressed, 1e-9);
        expect_weyl(b, a[0], a[1], a[2], 1e-8);
        // Equal invariants, equal point.
        const LocalInvariants ia = local_invariants(u), ib = local_invariants(dressed, 1e-9);
        EXPECT_NEAR(std::abs(ia.g1 - ib.g1), 0.0, 1e-9);
        EXPECT_NEAR(ia.g2, ib.g2, 1e-9);
    }
}

TEST(WeylCoordinatesProperty, RandomGatesLandInChamber) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const WeylPoint c = weyl_coordinates(t::random_unitary(4, rng), 1e-9);
        EXPECT_TRUE(in_chamber(c)) << c[0] << ' ' << c[1] << ' ' << c[2];
        // The invariants computed from the point agree with the gate's.
    }
}

TEST(WeylCoordinatesProperty, PointReproducesInvariants) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix u = t::random_unitary(4, rng);
        const WeylPoint c = weyl_coordinates(u, 1e-9);
        const auto [g1, g2] = t::invariants_from_weyl(c[0], c[1], c[2]);
        const LocalInvariants inv = local_invariants(u, 1e-9);
        EXPECT_NEAR(inv.g1.real(), g1.real(), 1e-8);
        EXPECT_NEAR(std::abs(inv.g1.imag()), std::abs(g1.imag()), 1e-8);
        EXPECT_NEAR(inv.g2, g2, 1e-8);
    }
}

TEST(WeylCoordinates, RejectsNonUnitary) {
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    u(0, 1) = 0.1;
    EXPECT_THROW((void)weyl_coordinates(u), PreconditionError);
}

TEST(EntanglingPowerAnalytic, KnownValues) {
    EXPECT_NEAR(entangling_power_analytic(kPi / 4.0), 2.0 / 9.0, 1e-15);
    EXPECT_NEAR(entangling_power_analytic(0.0), 0.0, 1e-15);
    EXPECT_NEAR(entangling_power_analytic(kPi / 8.0), 1.0 / 9.0, 1e-15);
}

TEST(EntanglingPower, InvariantFormAgreesWithClosedForm) {
    for (int k = 0; k <= 20; ++k) {
        const double a = k * (kPi / 2.0) / 20.0;
        EXPECT_NEAR(entangling_power_from_invariants(local_invariants(analytic_gate_2q(a))),
                    entangling_power_analytic(a), 1e-12);
    }
    EXPECT_NEAR(entangling_power_from_invariants(local_invariants(t::swap_gate())), 0.0, 1e-14);
}

TEST(EntanglingPowerMc, IdentityIsZero) {
    const EntanglingPowerEstimate e = entangling_power_mc(ComplexMatrix::Identity(4, 4), 2000, 1);
    EXPECT_NEAR(e.estimate, 0.0, 1e-12);
    EXPECT_NEAR(e.std_error, 0.0, 1e-12);
}

TEST(EntanglingPowerMc, CnotAndEntanglerReachMaximum) {
    for (const ComplexMatrix& u : {t::cnot(), analytic_gate_2q(kPi / 4.0)}) {
        const EntanglingPowerEstimate e = entangling_power_mc(u, 100000, 7);
        EXPECT_LE(std::abs(e.estimate - 2.0 / 9.0), 3.0 * e.std_error);
        EXPECT_GT(e.std_error, 0.0);
    }
}

TEST(EntanglingPowerMc, SeedDeterminism) {
    const ComplexMatrix u = analytic_gate_2q(0.4);
    const EntanglingPowerEstimate a = entangling_power_mc(u, 5000, 42);
    const EntanglingPowerEstimate b = entangling_power_mc(u, 5000, 42);
    const EntanglingPowerEstimate c = entangling_power_mc(u, 5000, 43);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(a.estimate, c.estimate);
}

TEST(EntanglingPowerMc, RejectsTooFewSamples) {
    EXPECT_THROW((void)entangling_power_mc(t::cnot(), 999, 0), PreconditionError);
}

TEST(HaarQubit, NormalizedAndBlochUniform) {
    std::mt19937_64 rng(9);
    double mean_z = 0.0, mean_z2 = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const StateVector psi = haar_qubit(rng);
        ASSERT_NEAR(psi.norm(), 1.0, 1e-14);
        const double z = std::norm(psi(0)) - std::norm(psi(1));
        mean_z += z / n;
        mean_z2 += z * z / n;
    }
    // Uniform on the sphere: <z> = 0, <z^2> = 1/3.
    EXPECT_NEAR(mean_z, 0.0, 0.02);
    EXPECT_NEAR(mean_z2, 1.0 / 3.0, 0.02);
}

TEST(LinearEntropy, ProductAndBellStates) {
    StateVector product(4);
    product << 1.0, 0.0, 0.0, 0.0;
    EXPECT_NEAR(linear_entropy(product), 0.0, 1e-15);
    StateVector bell(4);
    bell << 1.0, 0.0, 0.0, 1.0;
    EXPECT_NEAR(linear_entropy(bell / std::sqrt(2.0)), 0.5, 1e-15);
}

TEST(IsCnotClass, Examples) {
    EXPECT_TRUE(is_cnot_class(t::cnot()));
    EXPECT_TRUE(is_cnot_class(analytic_gate_2q(kPi / 4.0)));
    EXPECT_FALSE(is_cnot_class(t::swap_gate()));
    EXPECT_FALSE(is_cnot_class(analytic_gate_2q(0.5)));
    EXPECT_TRUE(is_cnot_class(analytic_gate_2q(0.5), 1.0));
}

TEST(Classify, AssemblesReport) {
    const EntanglementReport r = classify(analytic_gate_2q(kPi / 8.0), 20000, 3);
    EXPECT_NEAR(r.ep, 1.0 / 9.0, 1e-12);
    EXPECT_LE(std::abs(r.ep_mc.estimate - 1.0 / 9.0), 4.0 * r.ep_mc.std_error);
    expect_weyl(r.weyl, kPi / 4.0, 0.0, 0.0, 1e-9);
    EXPECT_FALSE(r.cnot_equivalent);
    EXPECT_GE(r.ep, 0.0);
    EXPECT_LE(r.ep, 2.0 / 9.0 + 1e-9);
}
