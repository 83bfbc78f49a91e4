#include "advdiff/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace advdiff {

CarlemanWeights CarlemanWeights::make(const PhysParams& params, double s,
                                      double Cshift) {
    params.validate();
    if (!(s > 0.0)) throw PreconditionError("CarlemanWeights: s must be positive");
    const double floor = std::exp(2.0 * params.L);
    if (Cshift < 0.0) Cshift = 2.0 * floor;
    if (!(Cshift > floor))
        throw PreconditionError("CarlemanWeights: Cshift must exceed e^{2L}");
    return CarlemanWeights{params.L, params.T, params.eps, Cshift, s,
                           params.control_side};
}

double CarlemanWeights::eta(double x) const {
    return obs_side == Boundary::gamma0_right ? 2.0 * L + x : L - x;
}

double CarlemanWeights::time_factor(double t) const {
    if (!(t > 0.0 && t < T))
        throw PreconditionError("CarlemanWeights: t must lie strictly in (0,T)");
    return eps * eps * t * (T - t);
}

double CarlemanWeights::alpha(double t, double x) const {
    return (Cshift - std::exp(eta(x))) / time_factor(t);
}

double CarlemanWeights::phi_w(double t, double x) const {
    return std::exp(eta(x)) / time_factor(t);
}

double CarlemanWeights::alpha_scaled(double t, double x) const {
    return (Cshift - std::exp(eta(x))) / (t * (t_tilde() - t));
}

double CarlemanWeights::phi_scaled(double t, double x) const {
    return std::exp(eta(x)) / (t * (t_tilde() - t));
}

double CarlemanWeights::alpha_scaled_t(double t, double x) const {
    const double d = t * (t_tilde() - t);
    return -(Cshift - std::exp(eta(x))) * (t_tilde() - 2.0 * t) / (d * d);
}

double CarlemanWeights::alpha_scaled_xt(double t, double x) const {
    const double d = t * (t_tilde() - t);
    return std::exp(eta(x)) * eta_slope() * (t_tilde() - 2.0 * t) / (d * d);
}

double CarlemanWeights::alpha_scaled_tt(double t, double x) const {
    const double d = t * (t_tilde() - t);
    const double dp = t_tilde() - 2.0 * t;
    return (Cshift - std::exp(eta(x))) * (2.0 / (d * d) + 2.0 * dp * dp / (d * d * d));
}

WeightValues eval_weights(const CarlemanWeights& w, double t, double x) {
    if (x < -w.L - 1e-12 || x > 1e-12)
        throw PreconditionError("eval_weights: x must lie in [-L, 0]");
    return {w.eta(x), w.alpha(t, x), w.phi_w(t, x)};
}

WeightIdentityReport check_weight_identities(const CarlemanWeights& w,
                                             int x_samples, int t_samples,
                                             double fd_h) {
    WeightIdentityReport rep{0.0, 0.0, 0.0, 0.0, 0.0};
    const double slope = w.obs_side == Boundary::gamma0_right ? 1.0 : -1.0;

    for (int it = 1; it <= t_samples; ++it) {
        const double t = w.T * it / (t_samples + 1);
        for (int ix = 0; ix < x_samples; ++ix) {
            // keep the FD stencil inside [-L, 0]
            const double x =
                -w.L + fd_h + (w.L - 2.0 * fd_h) * ix / (x_samples - 1);
            const double p = w.phi_w(t, x);
            const double fd1 =
                (w.alpha(t, x + fd_h) - w.alpha(t, x - fd_h)) / (2.0 * fd_h);
            const double fd2 = (w.alpha(t, x + fd_h) - 2.0 * w.alpha(t, x) +
                                w.alpha(t, x - fd_h)) /
                               (fd_h * fd_h);
            rep.max_rel_alpha_x =
                std::max(rep.max_rel_alpha_x, std::abs(fd1 + slope * p) / p);
            rep.max_rel_alpha_xx =
                std::max(rep.max_rel_alpha_xx, std::abs(fd2 + p) / p);
        }
    }

    const double tt = w.t_tilde();
    for (int it = 1; it <= t_samples; ++it) {
        const double t = tt * it / (t_samples + 1);
        for (int ix = 0; ix < x_samples; ++ix) {
            const double x = -w.L + w.L * ix / (x_samples - 1);
            const double p = w.phi_scaled(t, x);
            rep.max_ratio_alpha_t = std::max(
                rep.max_ratio_alpha_t, std::abs(w.alpha_scaled_t(t, x)) / (tt * p * p));
            rep.max_ratio_alpha_xt = std::max(
                rep.max_ratio_alpha_xt, std::abs(w.alpha_scaled_xt(t, x)) / (tt * p * p));
            rep.max_ratio_alpha_tt =
                std::max(rep.max_ratio_alpha_tt,
                         std::abs(w.alpha_scaled_tt(t, x)) / (tt * tt * p * p * p));
        }
    }
    return rep;
}

double s_threshold(const PhysParams& params, double sigma) {
    if (!(sigma > 0.0)) throw PreconditionError("s_threshold: sigma must be positive");
    const double et = params.eps * params.T;
    return sigma * (et + et * et);
}

double s_threshold_scaled(const PhysParams& params, double sigma) {
    if (!(sigma > 0.0)) throw PreconditionError("s_threshold: sigma must be positive");
    const double tt = params.eps * params.T;
    return sigma * (tt + tt * tt + tt * tt / params.eps +
                    std::cbrt(params.eps) * std::pow(tt, 2.0 / 3.0));
}

namespace {

constexpr double kExpFloor = -700.0;
constexpr double kExpCeil = 700.0;

double exp_clamped(double l, bool* overflow) {
    if (l < kExpFloor) return 0.0;
    if (l > kExpCeil) {
        if (overflow) *overflow = true;
        l = kExpCeil;
    }
    return std::exp(l);
}

} // namespace

CarlemanRatio inequality_ratio(const CarlemanWeights& w, const SpaceTimeField& phi,
                               const Grid1D& grid, const TimeGrid& tg) {
    if (phi.nt() != tg.nt() || phi.nx() != grid.nx())
        throw PreconditionError("inequality_ratio: history shape mismatch");
    const int nx = grid.nx();
    const int nt = tg.nt();
    const double h = grid.h();
    const double dt = tg.dt();
    const double s = w.s;
    const double s3 = s * s * s;
    const double s9 = s3 * s3 * s3;

    const int obs = boundary_node(w.obs_side, nx);
    const double x_obs = grid.node(obs);
    const double x_other = grid.node(obs == 0 ? nx : 0);

    CarlemanRatio out;
    std::vector<double> dphi(nx + 1);

    // The weights vanish at t = 0 and t = T; trapezoid in time over the
    // interior levels with zero endpoint values.
    for (int n = 1; n < nt; ++n) {
        const double t = tg.level(n);
        const auto row = phi.row(n);

        dphi[0] = (row[1] - row[0]) / h;
        for (int j = 1; j < nx; ++j) dphi[j] = (row[j + 1] - row[j - 1]) / (2.0 * h);
        dphi[nx] = (row[nx] - row[nx - 1]) / h;

        double vol = 0.0;
        for (int j = 0; j <= nx; ++j) {
            const double x = grid.node(j);
            const double a = w.alpha(t, x);
            const double lp = std::log(w.phi_w(t, x));
            const double w3 = exp_clamped(3.0 * lp - 2.0 * s * a, nullptr);
            const double w1 = exp_clamped(lp - 2.0 * s * a, nullptr);
            const double quad = (j == 0 || j == nx) ? 0.5 * h : h;
            vol += quad * (s3 * w3 * row[j] * row[j] + s * w1 * dphi[j] * dphi[j]);
        }

        double bdry = 0.0;
        for (int j : {0, nx}) {
            const double x = grid.node(j);
            const double a = w.alpha(t, x);
            const double lp = std::log(w.phi_w(t, x));
            bdry += s3 * exp_clamped(3.0 * lp - 2.0 * s * a, nullptr) * row[j] * row[j];
        }
        out.lhs += dt * (vol + bdry);

        const double lw = 9.0 * std::log(w.phi_w(t, x_obs)) -
                          4.0 * s * w.alpha(t, x_obs) +
                          2.0 * s * w.alpha(t, x_other);
        out.rhs += dt * s9 * exp_clamped(lw, &out.rhs_overflow) * row[obs] * row[obs];
    }

    if (out.rhs > 0.0) {
        out.ratio = out.lhs / out.rhs;
    } else if (out.lhs > 0.0) {
        out.ratio = std::numeric_limits<double>::infinity();
        out.rhs_underflow = true;
    } else {
        out.ratio = std::numeric_limits<double>::quiet_NaN();
        out.zero_over_zero = true;
    }
    return out;
}

} // namespace advdiff
