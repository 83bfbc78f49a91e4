#pragma once

#include "advdiff/adjoint.hpp"

namespace advdiff {

/// Output of the penalized null-control construction.
struct HumResult {
    StateField phiT_hat;     // minimizer of the penalized dual functional
    BoundaryTrace v;         // control = observed adjoint trace at the control node
    double terminal_norm;    // |u(T)|_X after re-simulating with (u0, v)
    double control_norm;     // sqrt(trace_l2_sq(v))
    int cg_iterations;
    double beta;
    bool converged;
};

/// The control-to-terminal Gramian: backward solve from phiT, re-inject its
/// observed control-node trace as the control of a forward solve from zero,
/// and return the terminal state. Self-adjoint and positive semidefinite in
/// the X inner product: <Lambda a, b>_X = sum_k w_k (Oa)_k (Ob)_k exactly.
/// Requires theta = 1 (the level-stored control is the exact adjoint of the
/// observation only for implicit Euler).
StateField gramian_apply(const SemidiscreteSystem& sys, const TimeGrid& tg,
                         const StateField& phiT);

/// Penalized HUM: solve (Lambda + beta I) phiT_hat = -z(T) by conjugate
/// gradient in the X geometry, where z is the free evolution of u0, then set
/// v to the observed trace of the backward solve from phiT_hat. The terminal
/// state of the controlled solve equals -beta*phiT_hat up to the CG residual.
HumResult compute_null_control(const SemidiscreteSystem& sys, const TimeGrid& tg,
                               const StateField& u0, double beta,
                               double tol = 1e-10, int max_iter = 2000);

/// Max over sampled basis directions psi_T = e_j of the Euler-Lagrange
/// residual |sum_k w_k (O psi)_k v_k + <u0, psi(0)>_X + beta <phiT_hat, e_j>_X|.
/// Bounded by the CG tolerance scale for a converged result.
double verify_optimality(const HumResult& result, const SemidiscreteSystem& sys,
                         const TimeGrid& tg, const StateField& u0,
                         int basis_stride = 1);

} // namespace advdiff
