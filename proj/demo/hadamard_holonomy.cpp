// Builds the Hadamard gate from one lambda loop on the three-qubit chain and
// prints the projected holonomy next to the closed form.

#include <iomanip>
#include <iostream>

#include "nhqc/holonomy.hpp"

int main() {
    using namespace nhqc;

    const GateParams1Q g = params_for_rotation(3.0 * kPi / 4.0, kPi, 1);
    const ComplexMatrix ideal = analytic_gate_1q(g.theta, g.gamma());
    const GateReport r =
        evolve_and_project(build_h1(g.couplings()), logical_frame_1q(), g.duration(), 101, ideal);

    std::cout << std::setprecision(6) << std::fixed;
    std::cout << "phi = " << g.phi << ", tau = " << g.duration() << "\n\n";
    std::cout << "holonomy:\n" << r.holonomy << "\n\nclosed form:\n" << ideal << "\n\n";
    std::cout << std::scientific << std::setprecision(3);
    std::cout << "distance           " << *r.analytic_distance << '\n';
    std::cout << "cyclicity residual " << r.cyclicity_residual << '\n';
    std::cout << "dynamical block    " << r.max_dynamical_norm << '\n';
}
