// Build the GFT of a small grid graph, cache its powers, and compare the
// series operator against the exact fractional power across orders.
#include <cstdio>

#include "fgfrft/fgfrft.hpp"

int main() {
    using namespace fgfrft;

    const Graph g = build_grid_graph(8, 8);
    const GftMatrix f = gft_from_shift(shift_operator(g, Normalization::combinatorial_laplacian));
    const UnitaryEigen eig = eigendecompose_unitary(f);
    const PowerCache cache(f, 20);

    std::printf("8x8 grid, N=%ld, phase margin %.4f rad\n", static_cast<long>(f.n()), phase_margin(f));
    std::printf("%8s %12s %12s\n", "alpha", "nmse(L=10)", "nmse(L=20)");
    for (double alpha : {0.15, 0.35, 0.55, 0.75, 0.95}) {
        const FracOperator exact = exact_gfrft(eig, alpha);
        const double e10 = matrix_errors(fgfrft_matrix(cache, alpha, 10).q, exact.q).nmse;
        const double e20 = matrix_errors(fgfrft_matrix(cache, alpha, 20).q, exact.q).nmse;
        std::printf("%8.2f %12.3e %12.3e\n", alpha, e10, e20);
    }
    return 0;
}
