#include "advdiff/march.hpp"

#include <string>
#include <algorithm>
#include <cmath>

namespace advdiff {

ThetaStepper::ThetaStepper(const SemidiscreteSystem& sys, double dt,
                           bool transpose_k)
    : dt_(dt), theta_(sys.theta), mass_(sys.mass.weights),
      a_(transpose_k ? sys.K.transposed() : sys.K) {
    if (!(dt > 0.0)) throw PreconditionError("ThetaStepper: dt must be positive");
    const int n = a_.size();
    // S = M + theta*dt*A, factored by the Thomas algorithm.
    std::vector<double> sd(n), sl(n), su(n);
    for (int i = 0; i < n; ++i) {
        sd[i] = mass_[i] + theta_ * dt_ * a_.diag[i];
        sl[i] = theta_ * dt_ * a_.lower[i];
        su[i] = theta_ * dt_ * a_.upper[i];
    }
    fac_diag_.assign(n, 0.0);
    fac_mult_.assign(n, 0.0);
    fac_diag_[0] = sd[0];
    for (int i = 1; i < n; ++i) {
        if (std::abs(fac_diag_[i - 1]) < 1e-300)
            throw SolverError("ThetaStepper: vanishing pivot in factorization");
        fac_mult_[i] = sl[i] / fac_diag_[i - 1];
        fac_diag_[i] = sd[i] - fac_mult_[i] * su[i - 1];
    }
    if (std::abs(fac_diag_[n - 1]) < 1e-300)
        throw SolverError("ThetaStepper: vanishing pivot in factorization");
}

void ThetaStepper::solve_inplace(std::span<double> rhs) const {
    const int n = a_.size();
    for (int i = 1; i < n; ++i) rhs[i] -= fac_mult_[i] * rhs[i - 1];
    rhs[n - 1] /= fac_diag_[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[i] = (rhs[i] - theta_ * dt_ * a_.upper[i] * rhs[i + 1]) / fac_diag_[i];
}

void ThetaStepper::advance(std::span<const double> from,
                           std::span<const double> load_departure,
                           std::span<const double> load_arrival,
                           std::span<double> to) const {
    const int n = a_.size();
    // rhs = (M - (1-theta)*dt*A) from + dt*((1-theta)*L_dep + theta*L_arr)
    if (theta_ == 1.0) {
        for (int i = 0; i < n; ++i) to[i] = mass_[i] * from[i];
    } else {
        a_.apply(from, to);
        const double c = (1.0 - theta_) * dt_;
        for (int i = 0; i < n; ++i) to[i] = mass_[i] * from[i] - c * to[i];
    }
    if (!load_departure.empty() || !load_arrival.empty()) {
        const double cd = dt_ * (1.0 - theta_);
        const double ca = dt_ * theta_;
        for (int i = 0; i < n; ++i) {
            if (!load_departure.empty()) to[i] += cd * load_departure[i];
            if (!load_arrival.empty()) to[i] += ca * load_arrival[i];
        }
    }
    solve_inplace(to);
}

void ThetaStepper::advance(std::span<const double> from,
                           std::span<double> to) const {
    advance(from, {}, {}, to);
}

StateField ForwardSolution::terminal() const {
    auto r = history.row(history.nt());
    return StateField(r.begin(), r.end());
}

BoundaryTrace ForwardSolution::trace(Boundary side) const {
    const int j = boundary_node(side, history.nx());
    BoundaryTrace tr{side, std::vector<double>(history.nt() + 1)};
    for (int n = 0; n <= history.nt(); ++n) tr.values[n] = history.at(n, j);
    return tr;
}

namespace {

// Nodal load vector at one time level: lumped interior source plus the weak
// boundary terms (g1 at node 0, g0 and/or control at their nodes).
void build_level_load(const SemidiscreteSystem& sys, int level,
                      const SpaceTimeField* f, const BoundaryTrace* g0,
                      const BoundaryTrace* g1, const BoundaryTrace* v,
                      std::span<double> out) {
    const int n = sys.grid.nx() + 1;
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    if (f) {
        auto fr = f->row(level);
        for (int i = 0; i < n; ++i) out[i] = sys.vol_weights[i] * fr[i];
    }
    if (g0) out[n - 1] += g0->values[level];
    if (g1) out[0] += g1->values[level];
    if (v) out[sys.control_node] += v->values[level];
}

void check_trace(const BoundaryTrace* tr, int nt, const char* name) {
    if (tr && tr->values.size() != static_cast<std::size_t>(nt) + 1)
        throw PreconditionError(std::string("solve_forward: ") + name +
                                " has wrong length");
}

} // namespace

StateField step(const SemidiscreteSystem& sys, const StateField& u_n,
                std::span<const double> load_n, std::span<const double> load_np1,
                double dt) {
    const std::size_t n = sys.mass.weights.size();
    if (u_n.size() != n) throw PreconditionError("step: state length mismatch");
    ThetaStepper stepper(sys, dt, /*transpose_k=*/false);
    StateField out(n);
    stepper.advance(u_n, load_n, load_np1, out);
    return out;
}

ForwardSolution solve_forward(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const StateField& u0, const SpaceTimeField* f,
                              const BoundaryTrace* g0, const BoundaryTrace* g1,
                              const BoundaryTrace* v) {
    const int nx = sys.grid.nx();
    const int nt = tg.nt();
    if (u0.size() != static_cast<std::size_t>(nx) + 1)
        throw PreconditionError("solve_forward: u0 length mismatch");
    if (f && (f->nt() != nt || f->nx() != nx))
        throw PreconditionError("solve_forward: f has wrong shape");
    check_trace(g0, nt, "g0");
    check_trace(g1, nt, "g1");
    check_trace(v, nt, "v");

    ForwardSolution sol{SpaceTimeField(nt, nx)};
    std::copy(u0.begin(), u0.end(), sol.history.row(0).begin());

    ThetaStepper stepper(sys, tg.dt(), /*transpose_k=*/false);
    const bool any_load = f || g0 || g1 || v;
    std::vector<double> load_a(nx + 1), load_b(nx + 1);
    if (any_load) build_level_load(sys, 0, f, g0, g1, v, load_a);
    for (int n = 0; n < nt; ++n) {
        if (any_load) {
            build_level_load(sys, n + 1, f, g0, g1, v, load_b);
            stepper.advance(sol.history.row(n), load_a, load_b,
                            sol.history.row(n + 1));
            std::swap(load_a, load_b);
        } else {
            stepper.advance(sol.history.row(n), sol.history.row(n + 1));
        }
    }
    return sol;
}

} // namespace advdiff
