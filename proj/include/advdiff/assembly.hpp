#pragma once

#include <cstdint>

#include "advdiff/mesh.hpp"

namespace advdiff {

/// Tridiagonal matrix. lower[i] = A(i,i-1) for i >= 1, diag[i] = A(i,i),
/// upper[i] = A(i,i+1) for i < n-1; the unused entries are zero.
struct TridiagMatrix {
    std::vector<double> lower, diag, upper;

    int size() const { return static_cast<int>(diag.size()); }
    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_transpose(std::span<const double> x, std::span<double> y) const;
    TridiagMatrix transposed() const;
};

/// x^T A x
double quadratic_form(const TridiagMatrix& a, std::span<const double> x);

/// The semidiscrete Galerkin system M u' + K u = loads on the X geometry.
/// K = eps*K_diff + K_adv + K_gamma1 where K_diff is the P1 stiffness matrix,
/// K_adv the P1 advection matrix and K_gamma1 a unit entry at (0,0). The
/// dynamic boundary conditions are imposed weakly, so boundary data enters
/// only through load vectors: g1 at node 0, g0 (or the control, when acting
/// on Gamma0) at node nx.
struct SemidiscreteSystem {
    Grid1D grid;
    double eps;
    Boundary control_side;
    double theta;  // 1.0 = implicit Euler, 0.5 = Crank-Nicolson
    bool upwind;

    XProduct mass;                    // diagonal X mass (M)
    std::vector<double> vol_weights;  // lumped L2(Omega) weights for f loads
    TridiagMatrix K;
    int control_node;  // where the control load is injected
    int obs_node;      // where adjoint solutions are observed (= control_node)
};

SemidiscreteSystem assemble(const Grid1D& grid, double eps,
                            Boundary control_side, double theta,
                            bool upwind = false);

/// Minimum of w^T K w / |w|^2 over a random sample; >= 0 certifies the
/// discrete maximal monotonicity of the operator.
double monotonicity_check(const SemidiscreteSystem& sys, int samples = 64,
                          std::uint64_t seed = 1234);

} // namespace advdiff
