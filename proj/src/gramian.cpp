#include "advdiff/gramian.hpp"

#include <cmath>

namespace advdiff {

QuadraticForms assemble_quadratic_forms(const SemidiscreteSystem& sys,
                                        const TimeGrid& tg, const ObsConfig& cfg,
                                        int dense_cap) {
    const int n = sys.grid.nx() + 1;
    if (n > dense_cap)
        throw PreconditionError("assemble_quadratic_forms: instance above dense cap");
    const int nt = tg.nt();
    const double dt = tg.dt();
    const int obs = boundary_node(cfg.obs_node, sys.grid.nx());

    QuadraticForms forms;
    Eigen::MatrixXd traces(nt + 1, n); // column j = observed series of e_j

    if (cfg.problem == ObsProblem::adjoint) {
        Eigen::MatrixXd initials(n, n); // column j = phi_j(0)
        StateField ej(n, 0.0);
        for (int j = 0; j < n; ++j) {
            ej[j] = 1.0;
            const AdjointSolution adj = solve_adjoint(sys, tg, ej);
            const BoundaryTrace y = observed_trace(
                adj.history, sys.theta,
                obs == 0 ? Boundary::gamma1_left : Boundary::gamma0_right);
            for (int k = 0; k <= nt; ++k) traces(k, j) = y.values[k];
            const StateField p0 = adj.initial();
            for (int i = 0; i < n; ++i) initials(i, j) = p0[i];
            ej[j] = 0.0;
        }
        const Eigen::VectorXd m =
            Eigen::Map<const Eigen::VectorXd>(sys.mass.weights.data(), n);
        forms.g_init = initials.transpose() * m.asDiagonal() * initials;
    } else {
        StateField ej(n, 0.0);
        for (int j = 0; j < n; ++j) {
            ej[j] = 1.0;
            const ForwardSolution fwd = solve_forward(sys, tg, ej);
            for (int k = 0; k <= nt; ++k) traces(k, j) = fwd.history.at(k, obs);
            ej[j] = 0.0;
        }
        forms.g_init = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) forms.g_init(i, i) = sys.mass.weights[i];
    }

    // Right-endpoint time quadrature: level 0 carries weight 0.
    Eigen::VectorXd w = Eigen::VectorXd::Constant(nt + 1, dt);
    w(0) = 0.0;
    forms.g_trace = traces.transpose() * w.asDiagonal() * traces;
    return forms;
}

double resolve_delta(const QuadraticForms& forms, double delta) {
    if (delta >= 0.0) return delta;
    const int n = static_cast<int>(forms.g_trace.rows());
    return 1e-14 * forms.g_trace.trace() / n;
}

namespace {

// Plain Cholesky, kept separate from the dense eigensolver route so the two
// estimates share no factorization code.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0))
            throw SolverError("power iteration: trace form not positive definite");
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& l, Eigen::VectorXd b) {
    const int n = static_cast<int>(l.rows());
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) b(i) -= l(i, k) * b(k);
        b(i) /= l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) b(i) -= l(k, i) * b(k);
        b(i) /= l(i, i);
    }
    return b;
}

double power_iteration_lambda_max(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b_reg) {
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd l = cholesky_lower(b_reg);
    // Deterministic start vector with components in every direction.
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.25 * std::sin(1.0 + 2.7 * i);
    x.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 50000; ++it) {
        const Eigen::VectorXd ax = a * x;
        const double num = x.dot(ax);
        const double den = x.dot(b_reg * x);
        const double next = num / den;
        Eigen::VectorXd y = cholesky_solve(l, ax);
        const double yn = y.norm();
        if (yn == 0.0) return 0.0; // A x vanished: lambda_max = 0
        x = y / yn;
        if (it > 0 && std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

} // namespace

double observability_constant_from_forms(const QuadraticForms& forms,
                                         double delta, EigMethod method) {
    const int n = static_cast<int>(forms.g_init.rows());
    const double d = resolve_delta(forms, delta);
    Eigen::MatrixXd b = forms.g_trace + d * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd a = forms.g_init;

    // Normalize by a power of two near the trace-form scale. The division is
    // exact, so jointly rescaled inputs (with delta rescaled accordingly)
    // reach the eigensolver bit-identically: the Rayleigh quotient's
    // homogeneity survives floating point.
    const double bscale = b.trace() / n;
    if (bscale > 0.0 && std::isfinite(bscale)) {
        const double s = std::exp2(std::round(std::log2(bscale)));
        a /= s;
        b /= s;
    }

    double lambda = 0.0;
    if (method == EigMethod::dense) {
        Eigen::LLT<Eigen::MatrixXd> llt(b);
        if (llt.info() != Eigen::Success)
            throw SolverError("observability_constant: trace form not positive "
                              "definite after regularization");
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
        if (es.info() != Eigen::Success)
            throw SolverError("observability_constant: eigensolver failed");
        lambda = es.eigenvalues().maxCoeff();
    } else {
        lambda = power_iteration_lambda_max(a, b);
    }
    if (lambda < -1e-10 * std::max(1.0, a.norm()))
        throw SolverError("observability_constant: indefinite initial form");
    return std::sqrt(std::max(lambda, 0.0));
}

double observability_constant(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const ObsConfig& cfg, EigMethod method,
                              int dense_cap) {
    const QuadraticForms forms = assemble_quadratic_forms(sys, tg, cfg, dense_cap);
    return observability_constant_from_forms(forms, cfg.delta, method);
}

std::vector<SweepPoint> illposedness_sweep(const PhysParams& params,
                                           const std::vector<int>& nx_list,
                                           const ObsConfig& cfg, double theta,
                                           int nt_per_nx) {
    params.validate();
    for (std::size_t i = 1; i < nx_list.size(); ++i)
        if (nx_list[i] <= nx_list[i - 1])
            throw PreconditionError("illposedness_sweep: nx_list must increase");
    std::vector<SweepPoint> out;
    out.reserve(nx_list.size());
    for (int nx : nx_list) {
        const Grid1D grid(params.L, nx);
        const TimeGrid tg(params.T, nt_per_nx * nx);
        const SemidiscreteSystem sys =
            assemble(grid, params.eps, params.control_side, theta);
        out.push_back({nx, observability_constant(sys, tg, cfg)});
    }
    return out;
}

} // namespace advdiff
