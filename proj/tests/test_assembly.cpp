#include <cmath>

#include "advdiff/assembly.hpp"
#include "advdiff/random.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace advdiff;

TEST_SUITE_BEGIN("assembly");

TEST_CASE("nx=2 operator matches the worked-out rows") {
    const Grid1D g(1.0, 2);
    const SemidiscreteSystem sys = assemble(g, 1.0, Boundary::gamma0_right, 1.0);
    const Eigen::MatrixXd k = testing::dense_matrix(sys.K);

    // eps*K_diff rows [2,-2,0; -2,4,-2; 0,-2,2], K_adv rows
    // [-1/2,1/2,0; -1/2,0,1/2; 0,-1/2,1/2], +1 at (0,0).
    Eigen::MatrixXd expect(3, 3);
    expect << 2.0 - 0.5 + 1.0, -2.0 + 0.5, 0.0,
              -2.0 - 0.5, 4.0, -2.0 + 0.5,
              0.0, -2.0 - 0.5, 2.0 + 0.5;
    CHECK((k - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator equals an independent hand element assembly exactly") {
    for (int nx : {2, 3, 8, 17}) {
        for (double eps : {1.0, 0.3, 0.05}) {
            const Grid1D g(1.3, nx);
            const SemidiscreteSystem sys =
                assemble(g, eps, Boundary::gamma0_right, 1.0);
            const Eigen::MatrixXd k = testing::dense_matrix(sys.K);
            const Eigen::MatrixXd hand = testing::hand_assembled_k(g, eps);
            CHECK((k - hand).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("constant fields only see the Gamma1 term") {
    const Grid1D g(1.0, 8);
    const SemidiscreteSystem sys = assemble(g, 0.7, Boundary::gamma0_right, 1.0);
    const StateField one(9, 1.0);
    StateField y(9);
    sys.K.apply(one, y);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i <= 8; ++i) CHECK(std::abs(y[i]) < 1e-14);
}

TEST_CASE("advection part obeys summation by parts") {
    // w^T K_adv w = (w_nx^2 - w_0^2)/2; isolate it as K(eps) - eps*K_diff - corner.
    Rng rng(3);
    for (int nx : {2, 3, 4, 5}) {
        const Grid1D g(1.0, nx);
        const SemidiscreteSystem sys = assemble(g, 1.0, Boundary::gamma0_right, 1.0);
        const Eigen::MatrixXd k = testing::dense_matrix(sys.K);
        Eigen::MatrixXd kdiff = testing::hand_assembled_k(g, 1.0);
        kdiff -= testing::hand_assembled_k(g, 0.0); // leaves 1.0*K_diff
        Eigen::MatrixXd kadv = k - kdiff;
        kadv(0, 0) -= 1.0;

        for (int s = 0; s < 20; ++s) {
            Eigen::VectorXd w(nx + 1);
            for (int i = 0; i <= nx; ++i) w(i) = rng.uniform_pm1();
            const double q = w.dot(kadv * w);
            const double expect = 0.5 * (w(nx) * w(nx) - w(0) * w(0));
            CHECK(std::abs(q - expect) < 1e-12 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("quadratic form identity and monotonicity") {
    Rng rng(11);
    const Grid1D g(1.0, 12);
    const double eps = 0.4;
    const SemidiscreteSystem sys = assemble(g, eps, Boundary::gamma0_right, 1.0);
    const Eigen::MatrixXd kdiff =
        (testing::hand_assembled_k(g, 1.0) - testing::hand_assembled_k(g, 0.0));

    for (int s = 0; s < 50; ++s) {
        StateField w(13);
        for (auto& wi : w) wi = rng.uniform_pm1();
        const double q = quadratic_form(sys.K, w);
        const Eigen::Map<const Eigen::VectorXd> wv(w.data(), 13);
        const double expect =
            eps * wv.dot(kdiff * wv) + 0.5 * (w[12] * w[12] + w[0] * w[0]);
        CHECK(std::abs(q - expect) < 1e-13 * (1.0 + std::abs(expect)));
        CHECK(q >= -1e-14);
    }
    CHECK(monotonicity_check(sys) >= 0.0);
}

TEST_CASE("worked monotonicity values at nx=2") {
    const Grid1D g(1.0, 2);
    const SemidiscreteSystem sys = assemble(g, 1.0, Boundary::gamma0_right, 1.0);
    StateField e0{1.0, 0.0, 0.0};
    CHECK(quadratic_form(sys.K, e0) == doctest::Approx(2.5).epsilon(1e-15));
    StateField one{1.0, 1.0, 1.0};
    CHECK(quadratic_form(sys.K, one) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("vanishing viscosity on interior fields") {
    const Grid1D g(1.0, 8);
    Rng rng(5);
    StateField w(9, 0.0);
    for (int i = 1; i < 8; ++i) w[i] = rng.uniform_pm1();
    const double q1 = quadratic_form(assemble(g, 1e-3, Boundary::gamma0_right, 1.0).K, w);
    const double q2 = quadratic_form(assemble(g, 1e-6, Boundary::gamma0_right, 1.0).K, w);
    CHECK(q1 >= 0.0);
    CHECK(q2 < q1);
    CHECK(q2 == doctest::Approx(q1 * 1e-3).epsilon(1e-6)); // pure diffusion scaling
}

TEST_CASE("control and observation nodes follow the control side") {
    const Grid1D g(1.0, 6);
    const auto s0 = assemble(g, 0.5, Boundary::gamma0_right, 1.0);
    CHECK(s0.control_node == 6);
    CHECK(s0.obs_node == 6);
    const auto s1 = assemble(g, 0.5, Boundary::gamma1_left, 1.0);
    CHECK(s1.control_node == 0);
    CHECK(s1.obs_node == 0);
    CHECK_THROWS_AS(assemble(g, 0.0, Boundary::gamma0_right, 1.0), PreconditionError);
    CHECK_THROWS_AS(assemble(g, 0.5, Boundary::gamma0_right, 0.75), PreconditionError);
}

TEST_CASE("upwind option keeps monotonicity and adds backward-difference rows") {
    const Grid1D g(1.0, 4);
    const SemidiscreteSystem sys =
        assemble(g, 0.01, Boundary::gamma0_right, 1.0, /*upwind=*/true);
    const Eigen::MatrixXd k = testing::dense_matrix(sys.K);
    // interior advective stencil becomes (-1, 1, 0) plus O(eps) diffusion
    CHECK(k(2, 1) == doctest::Approx(-1.0 - 0.04).epsilon(1e-12));
    CHECK(k(2, 2) == doctest::Approx(1.0 + 0.08).epsilon(1e-12));
    CHECK(k(2, 3) == doctest::Approx(-0.04).epsilon(1e-12));
    CHECK(monotonicity_check(sys) >= 0.0);
}

TEST_SUITE_END();
