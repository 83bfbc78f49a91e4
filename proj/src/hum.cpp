#include "advdiff/hum.hpp"

#include <algorithm>
#include <cmath>

namespace advdiff {

StateField gramian_apply(const SemidiscreteSystem& sys, const TimeGrid& tg,
                         const StateField& phiT) {
    if (sys.theta != 1.0)
        throw PreconditionError("gramian_apply: requires theta = 1");
    const AdjointSolution adj = solve_adjoint(sys, tg, phiT);
    BoundaryTrace v = adj.observed;
    v.side = sys.control_side;
    StateField zero(phiT.size(), 0.0);
    return solve_forward(sys, tg, zero, nullptr, nullptr, nullptr, &v).terminal();
}

HumResult compute_null_control(const SemidiscreteSystem& sys, const TimeGrid& tg,
                               const StateField& u0, double beta, double tol,
                               int max_iter) {
    if (!(beta > 0.0))
        throw PreconditionError("compute_null_control: beta must be positive");
    if (sys.theta != 1.0)
        throw PreconditionError("compute_null_control: requires theta = 1");
    const std::size_t n = sys.mass.weights.size();
    if (u0.size() != n)
        throw PreconditionError("compute_null_control: u0 length mismatch");

    const XProduct& xp = sys.mass;
    const auto apply_op = [&](const StateField& x) {
        StateField y = gramian_apply(sys, tg, x);
        for (std::size_t i = 0; i < n; ++i) y[i] += beta * x[i];
        return y;
    };

    // Right-hand side -z(T) from the free evolution of u0.
    StateField b = solve_forward(sys, tg, u0).terminal();
    for (double& bi : b) bi = -bi;
    const double bnorm = x_norm(b, xp);

    HumResult res{StateField(n, 0.0), BoundaryTrace{sys.control_side, {}},
                  0.0, 0.0, 1, beta, true};

    if (bnorm > 0.0) {
        // Conjugate gradient in the X inner product.
        StateField x(n, 0.0), r = b, p = r;
        double rr = x_inner(r, r, xp);
        int it = 0;
        bool ok = false;
        while (it < max_iter) {
            ++it;
            const StateField ap = apply_op(p);
            const double pap = x_inner(p, ap, xp);
            if (!(pap > 0.0)) break; // operator is PSD; stagnation guard
            const double alpha = rr / pap;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            const double rr_new = x_inner(r, r, xp);
            if (std::sqrt(rr_new) <= tol * bnorm) {
                ok = true;
                break;
            }
            const double beta_cg = rr_new / rr;
            rr = rr_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta_cg * p[i];
        }
        res.phiT_hat = std::move(x);
        res.cg_iterations = it;
        res.converged = ok;
    }

    const AdjointSolution adj = solve_adjoint(sys, tg, res.phiT_hat);
    res.v = adj.observed;
    res.v.side = sys.control_side;
    res.control_norm = std::sqrt(trace_l2_sq(res.v, tg));
    const ForwardSolution controlled =
        solve_forward(sys, tg, u0, nullptr, nullptr, nullptr, &res.v);
    res.terminal_norm = x_norm(controlled.terminal(), xp);
    return res;
}

double verify_optimality(const HumResult& result, const SemidiscreteSystem& sys,
                         const TimeGrid& tg, const StateField& u0,
                         int basis_stride) {
    if (basis_stride < 1)
        throw PreconditionError("verify_optimality: stride must be >= 1");
    const std::size_t n = sys.mass.weights.size();
    const double dt = tg.dt();
    double worst = 0.0;
    StateField ej(n, 0.0);
    for (std::size_t j = 0; j < n; j += basis_stride) {
        ej[j] = 1.0;
        const AdjointSolution psi = solve_adjoint(sys, tg, ej);
        double pairing = 0.0;
        for (int k = 1; k <= tg.nt(); ++k)
            pairing += dt * psi.observed.values[k] * result.v.values[k];
        const double init_term = x_inner(u0, psi.initial(), sys.mass);
        const double reg_term =
            result.beta * sys.mass.weights[j] * result.phiT_hat[j];
        worst = std::max(worst, std::abs(pairing + init_term + reg_term));
        ej[j] = 0.0;
    }
    return worst;
}

} // namespace advdiff
