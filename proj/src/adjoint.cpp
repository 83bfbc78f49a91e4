#include "advdiff/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace advdiff {

StateField AdjointSolution::initial() const {
    auto r = history.row(0);
    return StateField(r.begin(), r.end());
}

BoundaryTrace AdjointSolution::trace(Boundary side) const {
    const int j = boundary_node(side, history.nx());
    BoundaryTrace tr{side, std::vector<double>(history.nt() + 1)};
    for (int n = 0; n <= history.nt(); ++n) tr.values[n] = history.at(n, j);
    return tr;
}

BoundaryTrace observed_trace(const SpaceTimeField& history, double theta,
                             Boundary side) {
    const int j = boundary_node(side, history.nx());
    BoundaryTrace tr{side, std::vector<double>(history.nt() + 1, 0.0)};
    for (int k = 1; k <= history.nt(); ++k)
        tr.values[k] =
            theta * history.at(k - 1, j) + (1.0 - theta) * history.at(k, j);
    return tr;
}

namespace {

// Loads are the data (f, g0, g1) of the adjoint system. Written backward in
// time, the theta recursion absorbs its right-hand side with a reversed sign
// relative to M phi' = K^T phi + load, hence the negation here.
void build_level_load(const SemidiscreteSystem& sys, int level,
                      const SpaceTimeField* f, const BoundaryTrace* g0,
                      const BoundaryTrace* g1, std::span<double> out) {
    const int n = sys.grid.nx() + 1;
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    if (f) {
        auto fr = f->row(level);
        for (int i = 0; i < n; ++i) out[i] = -sys.vol_weights[i] * fr[i];
    }
    if (g0) out[n - 1] -= g0->values[level];
    if (g1) out[0] -= g1->values[level];
}

void check_trace(const BoundaryTrace* tr, int nt, const char* name) {
    if (tr && tr->values.size() != static_cast<std::size_t>(nt) + 1)
        throw PreconditionError(std::string("solve_adjoint: ") + name +
                                " has wrong length");
}

} // namespace

AdjointSolution solve_adjoint(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const StateField& phiT, const SpaceTimeField* f,
                              const BoundaryTrace* g0, const BoundaryTrace* g1) {
    const int nx = sys.grid.nx();
    const int nt = tg.nt();
    if (phiT.size() != static_cast<std::size_t>(nx) + 1)
        throw PreconditionError("solve_adjoint: phiT length mismatch");
    if (f && (f->nt() != nt || f->nx() != nx))
        throw PreconditionError("solve_adjoint: f has wrong shape");
    check_trace(g0, nt, "g0");
    check_trace(g1, nt, "g1");

    AdjointSolution sol{SpaceTimeField(nt, nx), {}};
    std::copy(phiT.begin(), phiT.end(), sol.history.row(nt).begin());

    ThetaStepper stepper(sys, tg.dt(), /*transpose_k=*/true);
    const bool any_load = f || g0 || g1;
    std::vector<double> load_dep(nx + 1), load_arr(nx + 1);
    if (any_load) build_level_load(sys, nt, f, g0, g1, load_dep);
    for (int n = nt; n > 0; --n) {
        if (any_load) {
            build_level_load(sys, n - 1, f, g0, g1, load_arr);
            stepper.advance(sol.history.row(n), load_dep, load_arr,
                            sol.history.row(n - 1));
            std::swap(load_dep, load_arr);
        } else {
            stepper.advance(sol.history.row(n), sol.history.row(n - 1));
        }
    }
    sol.observed = observed_trace(sol.history, sys.theta,
                                  sys.obs_node == 0 ? Boundary::gamma1_left
                                                    : Boundary::gamma0_right);
    return sol;
}

double duality_residual(const SemidiscreteSystem& sys, const TimeGrid& tg,
                        const StateField& u0, const BoundaryTrace& v,
                        const StateField& phiT) {
    if (v.values.size() != static_cast<std::size_t>(tg.nt()) + 1)
        throw PreconditionError("duality_residual: v has wrong length");

    BoundaryTrace ctrl = v;
    ctrl.side = sys.control_side;
    const ForwardSolution fwd =
        solve_forward(sys, tg, u0, nullptr, nullptr, nullptr, &ctrl);
    const AdjointSolution adj = solve_adjoint(sys, tg, phiT);

    const double dt = tg.dt();
    const double th = sys.theta;
    double pairing = 0.0;
    for (int k = 1; k <= tg.nt(); ++k) {
        const double vk = (1.0 - th) * v.values[k - 1] + th * v.values[k];
        pairing += dt * vk * adj.observed.values[k];
    }
    const double tT = x_inner(fwd.terminal(), phiT, sys.mass);
    const double t0 = x_inner(u0, adj.initial(), sys.mass);
    return std::abs(tT - t0 - pairing);
}

} // namespace advdiff
