#include "advdiff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <semaphore>
#include <string>

#include "advdiff/random.hpp"

namespace advdiff {

namespace {

// Run f(0..n-1) with at most `jobs` concurrent rows; results must be written
// into index-addressed slots so output order never depends on scheduling.
template <typename F>
void run_indexed(int n, int jobs, F&& f) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::counting_semaphore<> gate(jobs);
    std::vector<std::future<void>> futures;
    futures.reserve(n);
    for (int i = 0; i < n; ++i)
        futures.push_back(std::async(std::launch::async, [&f, &gate, i] {
            gate.acquire();
            try {
                f(i);
            } catch (...) {
                gate.release();
                throw;
            }
            gate.release();
        }));
    for (auto& fut : futures) fut.get();
}

int level_of(double t, const TimeGrid& tg, const char* name) {
    const double dt = tg.dt();
    const int n = static_cast<int>(std::llround(t / dt));
    if (n < 0 || n > tg.nt() || std::abs(n * dt - t) > 1e-9 * tg.horizon())
        throw PreconditionError(std::string("run_dissipation: ") + name +
                                " is not a grid level");
    return n;
}

StateField sin_profile(const Grid1D& grid) {
    StateField u(grid.nx() + 1);
    const double L = grid.length();
    for (int j = 0; j <= grid.nx(); ++j)
        u[j] = std::sin(std::numbers::pi * (grid.node(j) + L) / L);
    return u;
}

} // namespace

std::vector<DissipationRow> run_dissipation(const LabConfig& cfg, double t1,
                                            double t2, int trials,
                                            double slack) {
    cfg.phys.validate();
    if (!(t2 - t1 > cfg.phys.L))
        throw PreconditionError(
            "run_dissipation: requires t2 - t1 > L (the bound degenerates)");
    if (trials < 1) throw PreconditionError("run_dissipation: trials must be >= 1");

    const Grid1D grid(cfg.phys.L, cfg.nx);
    const TimeGrid tg(cfg.phys.T, cfg.nt);
    const int n1 = level_of(t1, tg, "t1");
    const int n2 = level_of(t2, tg, "t2");
    const SemidiscreteSystem sys =
        assemble(grid, cfg.phys.eps, cfg.phys.control_side, cfg.theta);

    const double gap = t2 - t1;
    const double bound =
        std::exp(-(gap - cfg.phys.L) * (gap - cfg.phys.L) / (4.0 * cfg.phys.eps * gap));

    Rng rng(cfg.seed);
    std::vector<DissipationRow> rows;
    rows.reserve(trials);
    for (int trial = 0; trial < trials; ++trial) {
        const StateField phiT = random_unit_state(rng, sys.mass);
        const AdjointSolution adj = solve_adjoint(sys, tg, phiT);
        const double a = x_norm(adj.history.row(n1), sys.mass);
        const double b = x_norm(adj.history.row(n2), sys.mass);
        rows.push_back({trial, a, b, bound, a <= slack * bound * b});
    }
    return rows;
}

std::vector<CostSweepRow> run_cost_sweep(const LabConfig& cfg,
                                         const std::vector<double>& eps_list,
                                         double beta, int nx_base) {
    if (eps_list.empty())
        throw PreconditionError("run_cost_sweep: eps_list must be nonempty");
    std::vector<CostSweepRow> rows(eps_list.size());
    run_indexed(static_cast<int>(eps_list.size()), cfg.jobs, [&](int i) {
        PhysParams p = cfg.phys;
        p.eps = eps_list[i];
        p.validate();
        // Peclet guard: refine until h <= eps (capped by the dense assembly
        // limit; a capped row is reported, not rejected).
        int nx = std::max(nx_base, static_cast<int>(std::ceil(p.L / p.eps)));
        nx = std::min(nx, 256);
        const Grid1D grid(p.L, nx);
        const TimeGrid tg(p.T, cfg.nt);
        const SemidiscreteSystem sys = assemble(grid, p.eps, p.control_side, 1.0);

        ObsConfig obs{ObsProblem::adjoint, p.control_side, cfg.delta};
        const double c_obs = observability_constant(sys, tg, obs);

        const StateField u0 = sin_profile(grid);
        const double u0n = x_norm(u0, sys.mass);
        const HumResult hum = compute_null_control(sys, tg, u0, beta);

        rows[i] = {p.eps,
                   nx,
                   tg.nt(),
                   c_obs,
                   hum.control_norm / u0n,
                   hum.terminal_norm,
                   grid.h() <= p.eps * (1.0 + 1e-12)};
    });
    return rows;
}

std::vector<IllposedRow> run_illposed(const LabConfig& cfg,
                                      const std::vector<int>& nx_list,
                                      int nt_per_nx) {
    const ObsConfig direct{ObsProblem::direct, Boundary::gamma1_left, cfg.delta};
    const ObsConfig adjoint{ObsProblem::adjoint, Boundary::gamma0_right, cfg.delta};
    const auto kd = illposedness_sweep(cfg.phys, nx_list, direct, cfg.theta, nt_per_nx);
    const auto ka = illposedness_sweep(cfg.phys, nx_list, adjoint, cfg.theta, nt_per_nx);
    std::vector<IllposedRow> rows(nx_list.size());
    for (std::size_t i = 0; i < nx_list.size(); ++i)
        rows[i] = {nx_list[i], kd[i].kappa, ka[i].kappa};
    return rows;
}

CarlemanReport run_carleman_report(const LabConfig& cfg, double sigma,
                                   int trials, double cshift) {
    cfg.phys.validate();
    if (trials < 1)
        throw PreconditionError("run_carleman_report: trials must be >= 1");
    const double s = s_threshold(cfg.phys, sigma);
    const CarlemanWeights w = CarlemanWeights::make(cfg.phys, s, cshift);

    const Grid1D grid(cfg.phys.L, cfg.nx);
    const TimeGrid tg(cfg.phys.T, cfg.nt);
    const SemidiscreteSystem sys =
        assemble(grid, cfg.phys.eps, cfg.phys.control_side, cfg.theta);

    CarlemanReport rep{s, w.Cshift, check_weight_identities(w), {}};
    Rng rng(cfg.seed);
    rep.rows.reserve(trials);
    for (int trial = 0; trial < trials; ++trial) {
        const StateField phiT = random_unit_state(rng, sys.mass);
        const AdjointSolution adj = solve_adjoint(sys, tg, phiT);
        const CarlemanRatio r = inequality_ratio(w, adj.history, grid, tg);
        rep.rows.push_back({trial, r.lhs, r.rhs, r.ratio});
    }
    return rep;
}

} // namespace advdiff
