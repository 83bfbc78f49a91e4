#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "advdiff/hum.hpp"
#include "advdiff/random.hpp"
#include "doctest.h"

using namespace advdiff;

namespace {

StateField sin_profile(const Grid1D& g) {
    StateField u(g.nx() + 1);
    for (int j = 0; j <= g.nx(); ++j)
        u[j] = std::sin(std::numbers::pi * (g.node(j) + g.length()) / g.length());
    return u;
}

Eigen::MatrixXd dense_gramian(const SemidiscreteSystem& sys, const TimeGrid& tg) {
    const int n = sys.grid.nx() + 1;
    Eigen::MatrixXd lam(n, n);
    StateField ej(n, 0.0);
    for (int j = 0; j < n; ++j) {
        ej[j] = 1.0;
        const StateField col = gramian_apply(sys, tg, ej);
        for (int i = 0; i < n; ++i) lam(i, j) = col[i];
        ej[j] = 0.0;
    }
    return lam;
}

} // namespace

TEST_SUITE_BEGIN("hum");

TEST_CASE("gramian of zero is zero") {
    const Grid1D g(1.0, 8);
    const TimeGrid tg(1.0, 20);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    const StateField out = gramian_apply(sys, tg, StateField(9, 0.0));
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("gramian is X-symmetric positive semidefinite") {
    const Grid1D g(1.0, 16);
    const TimeGrid tg(1.0, 50);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const StateField a = random_unit_state(rng, sys.mass);
        const StateField b = random_unit_state(rng, sys.mass);
        const StateField la = gramian_apply(sys, tg, a);
        const StateField lb = gramian_apply(sys, tg, b);
        const double sab = x_inner(la, b, sys.mass);
        const double sba = x_inner(a, lb, sys.mass);
        CHECK(std::abs(sab - sba) <= 1e-12 * std::max(1.0, std::abs(sab)));

        // <Lambda a, a>_X equals the trace quadrature of the observation
        const AdjointSolution adj = solve_adjoint(sys, tg, a);
        const double saa = x_inner(la, a, sys.mass);
        const double tq = trace_l2_sq(adj.observed, tg);
        CHECK(saa >= -1e-12);
        CHECK(std::abs(saa - tq) <= 1e-12 * std::max(1.0, tq));
    }
}

TEST_CASE("gramian requires implicit euler") {
    const Grid1D g(1.0, 8);
    const TimeGrid tg(1.0, 20);
    const SemidiscreteSystem cn = assemble(g, 0.5, Boundary::gamma0_right, 0.5);
    CHECK_THROWS_AS(gramian_apply(cn, tg, StateField(9, 0.0)), PreconditionError);
}

TEST_CASE("zero initial data needs no control") {
    const Grid1D g(1.0, 8);
    const TimeGrid tg(1.0, 20);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    const HumResult res = compute_null_control(sys, tg, StateField(9, 0.0), 1e-8);
    CHECK(res.cg_iterations == 1);
    CHECK(res.terminal_norm == 0.0);
    CHECK(res.control_norm == 0.0);
    for (double v : res.v.values) CHECK(v == 0.0);
}

TEST_CASE("penalized control drives the sin profile near zero") {
    const Grid1D g(1.0, 64);
    const TimeGrid tg(2.0, 400);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    const StateField u0 = sin_profile(g);
    const double u0n = x_norm(u0, sys.mass);

    const HumResult res = compute_null_control(sys, tg, u0, 1e-8);
    CHECK(res.converged);
    CHECK(res.terminal_norm <= 1e-2 * u0n);

    // the control is exactly the observed adjoint trace of the minimizer
    const AdjointSolution adj = solve_adjoint(sys, tg, res.phiT_hat);
    REQUIRE(res.v.values.size() == adj.observed.values.size());
    for (std::size_t k = 0; k < res.v.values.size(); ++k)
        CHECK(res.v.values[k] == adj.observed.values[k]);

    // terminal state equals -beta * phiT_hat up to the CG residual
    const ForwardSolution controlled =
        solve_forward(sys, tg, u0, nullptr, nullptr, nullptr, &res.v);
    StateField gap = controlled.terminal();
    for (std::size_t i = 0; i < gap.size(); ++i)
        gap[i] += res.beta * res.phiT_hat[i];
    CHECK(x_norm(gap, sys.mass) <= 1e-8 * u0n);
}

TEST_CASE("cg matches a dense direct solve of the penalized system") {
    const Grid1D g(1.0, 24);
    const TimeGrid tg(1.0, 60);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    Rng rng(67);
    const StateField u0 = random_unit_state(rng, sys.mass);
    const double beta = 1e-6;

    const HumResult res = compute_null_control(sys, tg, u0, beta, 1e-12, 5000);
    REQUIRE(res.converged);

    const int n = g.nx() + 1;
    Eigen::MatrixXd a = dense_gramian(sys, tg);
    a += beta * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd b(n);
    const StateField zT = solve_forward(sys, tg, u0).terminal();
    for (int i = 0; i < n; ++i) b(i) = -zT[i];
    const Eigen::VectorXd x = a.partialPivLu().solve(b);

    StateField diff(n);
    for (int i = 0; i < n; ++i) diff[i] = res.phiT_hat[i] - x(i);
    const double xn = x.norm();
    CHECK(x_norm(diff, sys.mass) <= 1e-6 * std::max(1.0, xn));
}

TEST_CASE("terminal norm decreases monotonically with the penalty") {
    const Grid1D g(1.0, 32);
    const TimeGrid tg(2.0, 150);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    const StateField u0 = sin_profile(g);
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {1e-4, 1e-6, 1e-8}) {
        const HumResult res = compute_null_control(sys, tg, u0, beta);
        CHECK(res.terminal_norm < prev);
        prev = res.terminal_norm;
    }
}

TEST_CASE("euler-lagrange residual at the scale of the cg tolerance") {
    const Grid1D g(1.0, 24);
    const TimeGrid tg(1.0, 60);
    const SemidiscreteSystem sys = assemble(g, 0.4, Boundary::gamma0_right, 1.0);
    const StateField u0 = sin_profile(g);
    const double tol = 1e-10;
    const HumResult res = compute_null_control(sys, tg, u0, 1e-8, tol);
    REQUIRE(res.converged);

    const double zscale = x_norm(solve_forward(sys, tg, u0).terminal(), sys.mass);
    const double resid = verify_optimality(res, sys, tg, u0);
    CHECK(resid <= 10.0 * tol * std::max(1.0, zscale));

    SUBCASE("zero initial data gives zero residual") {
        const HumResult zero = compute_null_control(sys, tg, StateField(25, 0.0), 1e-8);
        CHECK(verify_optimality(zero, sys, tg, StateField(25, 0.0)) == 0.0);
    }

    SUBCASE("dropping the penalty term leaves a beta-sized residual") {
        HumResult stripped = res;
        stripped.beta = 0.0; // removes the beta term from the identity
        const double r0 = verify_optimality(stripped, sys, tg, u0);
        double phimax = 0.0;
        for (std::size_t j = 0; j < res.phiT_hat.size(); ++j)
            phimax = std::max(phimax, std::abs(sys.mass.weights[j] * res.phiT_hat[j]));
        const double expected = 1e-8 * phimax;
        CHECK(r0 >= 0.1 * expected);
        CHECK(r0 <= 10.0 * (expected + resid));
    }
}

TEST_CASE("gamma1 control mirror") {
    const Grid1D g(1.0, 32);
    const TimeGrid tg(2.0, 150);
    const SemidiscreteSystem sys = assemble(g, 0.5, Boundary::gamma1_left, 1.0);
    const StateField u0 = sin_profile(g);
    const HumResult res = compute_null_control(sys, tg, u0, 1e-8);
    CHECK(res.converged);
    CHECK(res.v.side == Boundary::gamma1_left);
    CHECK(res.terminal_norm <= 5e-2 * x_norm(u0, sys.mass));
}

TEST_SUITE_END();
