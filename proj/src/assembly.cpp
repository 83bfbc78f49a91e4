#include "advdiff/assembly.hpp"

#include <limits>
#include <algorithm>
#include <cmath>
#include <random>

namespace advdiff {

void TridiagMatrix::apply(std::span<const double> x, std::span<double> y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += lower[i] * x[i - 1];
        if (i < n - 1) s += upper[i] * x[i + 1];
        y[i] = s;
    }
}

void TridiagMatrix::apply_transpose(std::span<const double> x,
                                    std::span<double> y) const {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += upper[i - 1] * x[i - 1];
        if (i < n - 1) s += lower[i + 1] * x[i + 1];
        y[i] = s;
    }
}

TridiagMatrix TridiagMatrix::transposed() const {
    const int n = size();
    TridiagMatrix t;
    t.lower.assign(n, 0.0);
    t.diag = diag;
    t.upper.assign(n, 0.0);
    for (int i = 1; i < n; ++i) t.lower[i] = upper[i - 1];
    for (int i = 0; i < n - 1; ++i) t.upper[i] = lower[i + 1];
    return t;
}

double quadratic_form(const TridiagMatrix& a, std::span<const double> x) {
    std::vector<double> y(x.size());
    a.apply(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

SemidiscreteSystem assemble(const Grid1D& grid, double eps,
                            Boundary control_side, double theta, bool upwind) {
    if (!(eps > 0.0)) throw PreconditionError("assemble: eps must be positive");
    if (theta != 1.0 && theta != 0.5)
        throw PreconditionError("assemble: theta must be 1.0 or 0.5");

    const int n = grid.nx() + 1;
    const double h = grid.h();

    TridiagMatrix k;
    k.lower.assign(n, 0.0);
    k.diag.assign(n, 0.0);
    k.upper.assign(n, 0.0);

    // Element loop over [x_j, x_{j+1}]; local P1 matrices
    //   stiffness (1/h)[[1,-1],[-1,1]],  advection [[-1/2,1/2],[-1/2,1/2]].
    const double inv_h = 1.0 / h;
    for (int j = 0; j < grid.nx(); ++j) {
        k.diag[j] += eps * inv_h + -0.5;
        k.upper[j] += eps * -inv_h + 0.5;
        k.lower[j + 1] += eps * -inv_h + -0.5;
        k.diag[j + 1] += eps * inv_h + 0.5;
    }
    // Gamma1 boundary term of the bilinear form.
    k.diag[0] += 1.0;

    if (upwind) {
        // Full upwinding as artificial diffusion h/2 on the advective part,
        // i.e. adding (1/2)*tridiag(-1,2,-1). Interior rows of the advection
        // block become the backward difference (-1, 1, 0).
        for (int j = 0; j < grid.nx(); ++j) {
            k.diag[j] += 0.5;
            k.upper[j] += -0.5;
            k.lower[j + 1] += -0.5;
            k.diag[j + 1] += 0.5;
        }
    }

    SemidiscreteSystem sys{grid,
                           eps,
                           control_side,
                           theta,
                           upwind,
                           build_x_product(grid, eps),
                           {},
                           std::move(k),
                           boundary_node(control_side, grid.nx()),
                           boundary_node(control_side, grid.nx())};
    sys.vol_weights.assign(static_cast<std::size_t>(n), h);
    sys.vol_weights.front() = 0.5 * h;
    sys.vol_weights.back() = 0.5 * h;
    return sys;
}

double monotonicity_check(const SemidiscreteSystem& sys, int samples,
                          std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    const int n = sys.K.size();
    std::vector<double> w(n);
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            w[i] = 2.0 * ((eng() >> 11) * 0x1.0p-53) - 1.0;
            norm2 += w[i] * w[i];
        }
        if (norm2 == 0.0) continue;
        worst = std::min(worst, quadratic_form(sys.K, w) / norm2);
    }
    return worst;
}

} // namespace advdiff
