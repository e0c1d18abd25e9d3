// Sweeps the two-qubit coupling angle and prints where each entangler lands
// in the Weyl chamber.

#include <cstdio>

#include "nhqc/entanglement.hpp"
#include "nhqc/holonomy.hpp"

int main() {
    using namespace nhqc;

    std::printf("%8s %10s %10s %10s %10s %6s\n", "angle", "c1", "c2", "c3", "e_p", "cnot");
    for (int k = 1; k <= 7; ++k) {
        const double angle = k * kPi / 16.0;
        const ComplexMatrix u = analytic_gate_2q(angle);
        const WeylPoint c = weyl_coordinates(u);
        const double ep = entangling_power_from_invariants(local_invariants(u));
        std::printf("%8.4f %10.6f %10.6f %10.6f %10.6f %6s\n", angle, c[0], c[1], c[2], ep,
                    is_cnot_class(u) ? "yes" : "no");
    }
}
