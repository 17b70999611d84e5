// Prints the first angular eigenvalues of a triangle system and the radial
// solution of the lowest nontrivial mode.

#include <cstdio>

#include "polyell/solver.hpp"

int main() {
    using namespace polyell;
    const auto spec = build_polygon({1.39, 2.595, 2.44});
    const auto table = SectorTable::build(spec);

    const double k = 1.0;
    const auto spectrum = angular_spectrum(table, k, 6, 360, 1e-5, 8000);
    std::printf("%2s %16s %12s\n", "n", "lambda", "drift");
    for (const auto& e : spectrum)
        std::printf("%2d %16.10f %12.2e\n", e.n, e.lambda, e.convergence);

    const auto radial = radial_solution(table, k, spectrum[1].lambda, RadialBC::Dirichlet,
                                        2.0, 2000);
    std::printf("\nradial mode (sector %s): psi2(2.0) = %.8f\n", radial.sector_id.c_str(),
                radial.psi.back());
    return 0;
}
