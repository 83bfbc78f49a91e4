// Command-line driver: configure an instance, run one experiment, write CSV.
//
// Exit codes: 0 success, 2 precondition violation (bad flags/config), 3
// solver failure.

#include <fstream>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "advdiff/csv.hpp"
#include "advdiff/experiments.hpp"
#include "advdiff/random.hpp"

using namespace advdiff;

namespace {

struct CliOptions {
    LabConfig lab;
    std::string out;
    std::string side = "gamma0";
    double t1 = 0.5;
    double t2 = 3.5;
    int trials = 20;
    double tol = 1e-10;
    int max_iter = 2000;
    double cshift = -1.0;
    std::string profile = "sin";
    std::string problem = "adjoint";
    std::string obs = "gamma0";
    std::string method = "dense";
    std::vector<double> eps_list{0.4, 0.2, 0.1};
    std::vector<int> nx_list{8, 16, 32, 64};
    int nx_base = 48;
    int nt_per_nx = 25;
};

Boundary parse_side(const std::string& s) {
    if (s == "gamma0") return Boundary::gamma0_right;
    if (s == "gamma1") return Boundary::gamma1_left;
    throw PreconditionError("unknown boundary side: " + s);
}

std::vector<std::pair<std::string, std::string>> base_params(const CliOptions& o) {
    const auto d = [](double v) { return CsvWriter::format(v); };
    return {{"L", d(o.lab.phys.L)},
            {"T", d(o.lab.phys.T)},
            {"eps", d(o.lab.phys.eps)},
            {"nx", std::to_string(o.lab.nx)},
            {"nt", std::to_string(o.lab.nt)},
            {"theta", d(o.lab.theta)},
            {"beta", d(o.lab.beta)},
            {"sigma", d(o.lab.sigma)},
            {"delta", d(o.lab.delta)},
            {"seed", std::to_string(o.lab.seed)}};
}

StateField initial_profile(const CliOptions& o, const Grid1D& g,
                           const XProduct& xp) {
    StateField u(g.nx() + 1, 0.0);
    if (o.profile == "zero") return u;
    if (o.profile == "sin") {
        for (int j = 0; j <= g.nx(); ++j)
            u[j] = std::sin(std::numbers::pi * (g.node(j) + g.length()) / g.length());
        return u;
    }
    if (o.profile == "hat") {
        const double mid = -0.5 * g.length();
        for (int j = 0; j <= g.nx(); ++j)
            u[j] = std::max(0.0,
                            1.0 - std::abs(g.node(j) - mid) / (0.25 * g.length()));
        return u;
    }
    if (o.profile == "random") {
        Rng rng(o.lab.seed);
        return random_unit_state(rng, xp);
    }
    throw PreconditionError("unknown profile: " + o.profile);
}

int cmd_solve(const CliOptions& o, std::ostream& os) {
    const Grid1D grid(o.lab.phys.L, o.lab.nx);
    const TimeGrid tg(o.lab.phys.T, o.lab.nt);
    const SemidiscreteSystem sys =
        assemble(grid, o.lab.phys.eps, o.lab.phys.control_side, o.lab.theta);
    const StateField u0 = initial_profile(o, grid, sys.mass);
    const ForwardSolution sol = solve_forward(sys, tg, u0);

    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"profile", o.profile});
    w.params(kv);
    w.header({"n", "t", "u_gamma1", "u_gamma0", "x_norm"});
    for (int n = 0; n <= tg.nt(); ++n)
        w.row({static_cast<std::int64_t>(n), tg.level(n),
               sol.history.at(n, 0), sol.history.at(n, grid.nx()),
               x_norm(sol.history.row(n), sys.mass)});
    return 0;
}

int cmd_control(const CliOptions& o, std::ostream& os) {
    const Grid1D grid(o.lab.phys.L, o.lab.nx);
    const TimeGrid tg(o.lab.phys.T, o.lab.nt);
    const SemidiscreteSystem sys =
        assemble(grid, o.lab.phys.eps, o.lab.phys.control_side, o.lab.theta);
    const StateField u0 = initial_profile(o, grid, sys.mass);
    const HumResult res =
        compute_null_control(sys, tg, u0, o.lab.beta, o.tol, o.max_iter);

    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"profile", o.profile});
    kv.push_back({"terminal_norm", CsvWriter::format(res.terminal_norm)});
    kv.push_back({"control_norm", CsvWriter::format(res.control_norm)});
    kv.push_back({"cg_iterations", std::to_string(res.cg_iterations)});
    kv.push_back({"converged", res.converged ? "1" : "0"});
    w.params(kv);
    w.header({"n", "t", "v"});
    for (int n = 0; n <= tg.nt(); ++n)
        w.row({static_cast<std::int64_t>(n), tg.level(n), res.v.values[n]});
    return res.converged ? 0 : 3;
}

int cmd_observability(const CliOptions& o, std::ostream& os) {
    const Grid1D grid(o.lab.phys.L, o.lab.nx);
    const TimeGrid tg(o.lab.phys.T, o.lab.nt);
    const SemidiscreteSystem sys =
        assemble(grid, o.lab.phys.eps, o.lab.phys.control_side, o.lab.theta);
    ObsConfig cfg;
    cfg.problem = o.problem == "direct" ? ObsProblem::direct : ObsProblem::adjoint;
    if (o.problem != "direct" && o.problem != "adjoint")
        throw PreconditionError("unknown problem: " + o.problem);
    cfg.obs_node = parse_side(o.obs);
    cfg.delta = o.lab.delta;
    const QuadraticForms forms = assemble_quadratic_forms(sys, tg, cfg);
    const double delta_used = resolve_delta(forms, cfg.delta);

    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"problem", o.problem});
    kv.push_back({"obs", o.obs});
    w.params(kv);
    w.header({"method", "c_obs", "delta_used"});
    if (o.method == "dense" || o.method == "both")
        w.row({std::string("dense"),
               observability_constant_from_forms(forms, cfg.delta, EigMethod::dense),
               delta_used});
    if (o.method == "power" || o.method == "both")
        w.row({std::string("power"),
               observability_constant_from_forms(forms, cfg.delta,
                                                 EigMethod::power_iteration),
               delta_used});
    if (o.method != "dense" && o.method != "power" && o.method != "both")
        throw PreconditionError("unknown method: " + o.method);
    return 0;
}

int cmd_dissipation(const CliOptions& o, std::ostream& os) {
    const auto rows = run_dissipation(o.lab, o.t1, o.t2, o.trials);
    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"t1", CsvWriter::format(o.t1)});
    kv.push_back({"t2", CsvWriter::format(o.t2)});
    kv.push_back({"trials", std::to_string(o.trials)});
    w.params(kv);
    w.header({"trial", "norm_t1", "norm_t2", "bound_factor", "satisfied"});
    for (const auto& r : rows)
        w.row({static_cast<std::int64_t>(r.trial), r.norm_t1, r.norm_t2,
               r.bound_factor, r.satisfied});
    return 0;
}

int cmd_carleman(const CliOptions& o, std::ostream& os) {
    const CarlemanReport rep =
        run_carleman_report(o.lab, o.lab.sigma, o.trials, o.cshift);
    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"trials", std::to_string(o.trials)});
    kv.push_back({"s", CsvWriter::format(rep.s)});
    kv.push_back({"cshift", CsvWriter::format(rep.cshift)});
    kv.push_back({"max_rel_alpha_x", CsvWriter::format(rep.identities.max_rel_alpha_x)});
    kv.push_back({"max_rel_alpha_xx", CsvWriter::format(rep.identities.max_rel_alpha_xx)});
    kv.push_back({"max_ratio_alpha_t", CsvWriter::format(rep.identities.max_ratio_alpha_t)});
    kv.push_back({"max_ratio_alpha_xt", CsvWriter::format(rep.identities.max_ratio_alpha_xt)});
    kv.push_back({"max_ratio_alpha_tt", CsvWriter::format(rep.identities.max_ratio_alpha_tt)});
    w.params(kv);
    w.header({"trial", "lhs", "rhs", "ratio"});
    for (const auto& r : rep.rows)
        w.row({static_cast<std::int64_t>(r.trial), r.lhs, r.rhs, r.ratio});
    return 0;
}

int cmd_cost_sweep(const CliOptions& o, std::ostream& os) {
    const auto rows = run_cost_sweep(o.lab, o.eps_list, o.lab.beta, o.nx_base);
    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"nx_base", std::to_string(o.nx_base)});
    std::string eps_list;
    for (double e : o.eps_list)
        eps_list += (eps_list.empty() ? "" : ";") + CsvWriter::format(e);
    kv.push_back({"eps_list", eps_list});
    w.params(kv);
    w.header({"eps", "nx", "nt", "c_obs", "control_norm_ratio", "terminal_norm",
              "peclet_ok"});
    for (const auto& r : rows)
        w.row({r.eps, static_cast<std::int64_t>(r.nx),
               static_cast<std::int64_t>(r.nt), r.c_obs, r.control_ratio,
               r.terminal_norm, r.peclet_ok});
    return 0;
}

int cmd_illposed(const CliOptions& o, std::ostream& os) {
    const auto rows = run_illposed(o.lab, o.nx_list, o.nt_per_nx);
    CsvWriter w(os);
    auto kv = base_params(o);
    kv.push_back({"nt_per_nx", std::to_string(o.nt_per_nx)});
    std::string nx_list;
    for (int n : o.nx_list)
        nx_list += (nx_list.empty() ? "" : ";") + std::to_string(n);
    kv.push_back({"nx_list", nx_list});
    w.params(kv);
    w.header({"nx", "kappa_direct_gamma1", "kappa_adjoint_gamma0"});
    for (const auto& r : rows)
        w.row({static_cast<std::int64_t>(r.nx), r.kappa_direct_g1,
               r.kappa_adjoint_g0});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CliOptions o;
    CLI::App app{"numerical laboratory for boundary control of a 1D "
                 "advection-diffusion system with dynamic boundary conditions"};
    app.set_config("--config", "", "flat key=value config file; flags win");
    app.require_subcommand(1);

    app.add_option("--L", o.lab.phys.L, "domain length");
    app.add_option("--T", o.lab.phys.T, "time horizon");
    app.add_option("--eps", o.lab.phys.eps, "viscosity in (0,1]");
    app.add_option("--nx", o.lab.nx, "spatial cells");
    app.add_option("--nt", o.lab.nt, "time steps");
    app.add_option("--theta", o.lab.theta, "time scheme: 1.0 or 0.5");
    app.add_option("--beta", o.lab.beta, "HUM penalization");
    app.add_option("--sigma", o.lab.sigma, "Carleman threshold multiplier");
    app.add_option("--delta", o.lab.delta, "trace-form regularization (<0: auto)");
    app.add_option("--t1", o.t1, "dissipation window start");
    app.add_option("--t2", o.t2, "dissipation window end");
    app.add_option("--trials", o.trials, "number of random trials");
    app.add_option("--seed", o.lab.seed, "RNG seed");
    app.add_option("--jobs", o.lab.jobs, "max concurrent sweep rows");
    app.add_option("--side", o.side, "control side: gamma0 | gamma1");
    app.add_option("--out", o.out, "output CSV path (default stdout)");

    auto* solve = app.add_subcommand("solve", "free evolution traces and norms");
    solve->add_option("--profile", o.profile, "zero | sin | hat | random");
    auto* control = app.add_subcommand("control", "penalized HUM null control");
    control->add_option("--profile", o.profile, "zero | sin | hat | random");
    control->add_option("--tol", o.tol, "CG relative tolerance");
    control->add_option("--max-iter", o.max_iter, "CG iteration cap");
    auto* obs = app.add_subcommand("observability", "observability constant");
    obs->add_option("--problem", o.problem, "adjoint | direct");
    obs->add_option("--obs", o.obs, "observation node: gamma0 | gamma1");
    obs->add_option("--method", o.method, "dense | power | both");
    auto* diss = app.add_subcommand("dissipation", "backward dissipation bound");
    auto* carl = app.add_subcommand("carleman", "weight identities and ratios");
    carl->add_option("--cshift", o.cshift, "weight shift C (<0: 2 e^{2L})");
    auto* cost = app.add_subcommand("cost-sweep", "control cost vs viscosity");
    cost->add_option("--eps-list", o.eps_list, "viscosities to sweep");
    cost->add_option("--nx-base", o.nx_base, "minimum spatial cells per row");
    auto* illp = app.add_subcommand("illposed", "reconstruction constant sweep");
    illp->add_option("--nx-list", o.nx_list, "spatial resolutions");
    illp->add_option("--nt-per-nx", o.nt_per_nx, "time steps per spatial cell");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        o.lab.phys.control_side = parse_side(o.side);
        o.lab.phys.validate();

        std::ofstream file;
        if (!o.out.empty()) {
            file.open(o.out, std::ios::binary);
            if (!file) throw PreconditionError("cannot open output: " + o.out);
        }
        std::ostream& os = o.out.empty() ? std::cout : file;

        if (solve->parsed()) return cmd_solve(o, os);
        if (control->parsed()) return cmd_control(o, os);
        if (obs->parsed()) return cmd_observability(o, os);
        if (diss->parsed()) return cmd_dissipation(o, os);
        if (carl->parsed()) return cmd_carleman(o, os);
        if (cost->parsed()) return cmd_cost_sweep(o, os);
        if (illp->parsed()) return cmd_illposed(o, os);
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    }
}
