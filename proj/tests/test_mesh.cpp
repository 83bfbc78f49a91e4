#include <cmath>
#include <numbers>

#include "advdiff/mesh.hpp"
#include "advdiff/random.hpp"
#include "doctest.h"

using namespace advdiff;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("grid endpoints and spacing") {
    const Grid1D g(2.0, 8);
    CHECK(g.node(0) == -2.0);
    CHECK(g.node(8) == 0.0);
    CHECK(g.h() == doctest::Approx(0.25).epsilon(1e-15));
    for (int j = 1; j <= 8; ++j) CHECK(g.node(j) > g.node(j - 1));
    CHECK_THROWS_AS(Grid1D(2.0, 1), PreconditionError);
    CHECK_THROWS_AS(Grid1D(-1.0, 8), PreconditionError);
}

TEST_CASE("time grid endpoints") {
    const TimeGrid tg(3.0, 6);
    CHECK(tg.level(0) == 0.0);
    CHECK(tg.level(6) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(TimeGrid(1.0, 0), PreconditionError);
}

TEST_CASE("x product weights") {
    const Grid1D g(1.0, 4);
    const XProduct xp = build_x_product(g, 0.1);
    REQUIRE(xp.weights.size() == 5);
    CHECK(xp.weights[0] == doctest::Approx(0.225).epsilon(1e-15));
    CHECK(xp.weights[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(xp.weights[4] == doctest::Approx(0.225).epsilon(1e-15));

    // eps = 0 degenerates to the trapezoid rule
    const Grid1D g2(1.0, 2);
    const XProduct trap = build_x_product(g2, 0.0);
    CHECK(trap.weights[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(trap.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(trap.weights[2] == doctest::Approx(0.25).epsilon(1e-15));

    const Grid1D g3(2.0, 10);
    const XProduct xp3 = build_x_product(g3, 0.3);
    double sum = 0.0;
    for (double w : xp3.weights) sum += w;
    CHECK(sum == doctest::Approx(2.6).epsilon(1e-14)); // L + 2 eps
}

TEST_CASE("x inner product basics") {
    const Grid1D g(1.0, 16);
    const XProduct xp = build_x_product(g, 0.1);
    const StateField zero(17, 0.0), one(17, 1.0);
    CHECK(x_inner(zero, zero, xp) == 0.0);
    CHECK(x_inner(one, one, xp) == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(x_norm(one, xp) == doctest::Approx(std::sqrt(1.2)).epsilon(1e-14));

    Rng rng(7);
    StateField a(17), b(17);
    for (int i = 0; i < 17; ++i) {
        a[i] = rng.uniform_pm1();
        b[i] = rng.uniform_pm1();
    }
    CHECK(x_inner(a, b, xp) == x_inner(b, a, xp)); // exact symmetry
    CHECK(x_inner(a, a, xp) > 0.0);

    StateField bad(5, 1.0);
    CHECK_THROWS_AS(x_inner(a, bad, xp), PreconditionError);
}

TEST_CASE("x norm of a smooth sample converges at trapezoid order") {
    // u(x) = e^x on (-1,0):  |u|_X^2 = (1 - e^{-2})/2 + eps (1 + e^{-2})
    const double eps = 0.25;
    const double exact =
        0.5 * (1.0 - std::exp(-2.0)) + eps * (1.0 + std::exp(-2.0));
    double prev_err = 0.0;
    std::vector<double> errs;
    for (int nx : {8, 16, 32, 64}) {
        const Grid1D g(1.0, nx);
        const XProduct xp = build_x_product(g, eps);
        StateField u(nx + 1);
        for (int j = 0; j <= nx; ++j) u[j] = std::exp(g.node(j));
        errs.push_back(std::abs(x_inner(u, u, xp) - exact));
        (void)prev_err;
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        CHECK(order > 1.8);
        CHECK(order < 2.2);
    }
}

TEST_CASE("trace quadrature") {
    const TimeGrid tg(2.0, 4);
    BoundaryTrace tr{Boundary::gamma0_right, std::vector<double>(5, 1.0)};
    CHECK(trace_l2_sq(tr, tg) == doctest::Approx(2.0).epsilon(1e-15));

    BoundaryTrace zero{Boundary::gamma0_right, std::vector<double>(5, 0.0)};
    CHECK(trace_l2_sq(zero, tg) == 0.0);

    // tr_n = t_n: right Riemann sum of t^2 on (0,1)
    const TimeGrid fine(1.0, 1000);
    BoundaryTrace ramp{Boundary::gamma0_right, std::vector<double>(1001)};
    for (int n = 0; n <= 1000; ++n) ramp.values[n] = fine.level(n);
    CHECK(std::abs(trace_l2_sq(ramp, fine) - 1.0 / 3.0) < 2e-3);

    BoundaryTrace bad{Boundary::gamma0_right, std::vector<double>(3, 0.0)};
    CHECK_THROWS_AS(trace_l2_sq(bad, tg), PreconditionError);
}

TEST_CASE("trace quadrature splits additively at a grid level") {
    const int nt = 12, cut = 5;
    const double t_total = 3.0;
    const TimeGrid tg(t_total, nt);
    Rng rng(99);
    BoundaryTrace tr{Boundary::gamma0_right, std::vector<double>(nt + 1)};
    for (auto& v : tr.values) v = rng.uniform_pm1();

    const double t_cut = tg.level(cut);
    const TimeGrid left(t_cut, cut), right(t_total - t_cut, nt - cut);
    BoundaryTrace trl{tr.side, {tr.values.begin(), tr.values.begin() + cut + 1}};
    BoundaryTrace trr{tr.side, {tr.values.begin() + cut, tr.values.end()}};
    CHECK(trace_l2_sq(tr, tg) ==
          doctest::Approx(trace_l2_sq(trl, left) + trace_l2_sq(trr, right))
              .epsilon(1e-14));
    CHECK(trace_l2_sq(tr, tg) >= 0.0);
}

TEST_CASE("phys params validation") {
    PhysParams p;
    p.L = 1.0;
    p.T = 2.0;
    p.eps = 0.5;
    CHECK_NOTHROW(p.validate());
    p.eps = 0.0;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
    p.eps = 1.5;
    CHECK_THROWS_AS(p.validate(), PreconditionError);
}

TEST_SUITE_END();
