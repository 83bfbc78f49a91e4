#pragma once

#include "advdiff/march.hpp"

namespace advdiff {

/// Backward solution of the adjoint system, produced by the exact transpose
/// of the forward recursion in the discrete X inner product.
///
/// `observed` is the boundary observation aligned with the duality pairing:
/// entry k (k = 1..nt) is the adjoint value the control acting over step
/// k-1 -> k pairs with, namely theta*phi^{k-1} + (1-theta)*phi^k at the
/// observation node (for implicit Euler simply phi^{k-1}). Entry 0 is 0 and
/// carries quadrature weight 0.
struct AdjointSolution {
    SpaceTimeField history;
    BoundaryTrace observed;

    StateField initial() const; // phi(0)
    BoundaryTrace trace(Boundary side) const; // raw level-indexed trace
};

/// Observation series at `node` for a backward history, in the duality-exact
/// alignment described above.
BoundaryTrace observed_trace(const SpaceTimeField& history, double theta,
                             Boundary side);

/// Backward march of (S'_{f,g0,g1}) from phi(T) = phiT. Loads follow the same
/// placement convention as solve_forward, mirrored in time: the step from
/// level k to k-1 weights the data as theta*load^{k-1} + (1-theta)*load^k.
AdjointSolution solve_adjoint(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const StateField& phiT,
                              const SpaceTimeField* f = nullptr,
                              const BoundaryTrace* g0 = nullptr,
                              const BoundaryTrace* g1 = nullptr);

/// |<u(T),phiT>_X - <u0,phi(0)>_X - sum_k w_k <v>_k y_k| for the forward
/// solve driven by v and the homogeneous backward solve from phiT, where
/// <v>_k = (1-theta) v^{k-1} + theta v^k is the load the scheme actually
/// applies over step k-1 -> k and y is the observed trace. Zero to machine
/// precision by construction; this identity defines the pairing weights.
double duality_residual(const SemidiscreteSystem& sys, const TimeGrid& tg,
                        const StateField& u0, const BoundaryTrace& v,
                        const StateField& phiT);

} // namespace advdiff
