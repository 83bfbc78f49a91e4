#pragma once

#include "advdiff/mesh.hpp"

namespace advdiff {

/// Singular exponential weight family on (0,T) x [-L,0]:
///   eta(x)   = 2L + x            (Gamma0 observation; L - x for Gamma1)
///   alpha    = (C - e^eta) / (eps^2 t (T-t))
///   phi_w    = e^eta / (eps^2 t (T-t))
/// with C > e^{2L}. The time-rescaled variants (horizon T~ = eps*T) drop the
/// eps^2 factor and are used for the derivative-ratio diagnostics.
struct CarlemanWeights {
    double L, T, eps;
    double Cshift;
    double s;
    Boundary obs_side;

    /// Default Cshift is 2*e^{2L}. Any Cshift > e^{2L} keeps alpha
    /// positive, but the boundary weight of the inequality stays integrable
    /// near t = 0, T only for Cshift >= 2*e^{2L} - e^{L}; the default
    /// satisfies both with margin.
    static CarlemanWeights make(const PhysParams& params, double s,
                                double Cshift = -1.0);

    double eta(double x) const;
    double alpha(double t, double x) const;  // 0 < t < T enforced
    double phi_w(double t, double x) const;

    double t_tilde() const { return eps * T; }
    // scaled weights on (0, t_tilde)
    double alpha_scaled(double t, double x) const;
    double phi_scaled(double t, double x) const;
    // analytic time derivatives of the scaled alpha
    double alpha_scaled_t(double t, double x) const;
    double alpha_scaled_xt(double t, double x) const;
    double alpha_scaled_tt(double t, double x) const;

private:
    double time_factor(double t) const; // eps^2 t (T-t), validated
    double eta_slope() const { return obs_side == Boundary::gamma0_right ? 1.0 : -1.0; }
};

struct WeightValues {
    double eta, alpha, phi_w;
};

WeightValues eval_weights(const CarlemanWeights& w, double t, double x);

/// Finite-difference check of alpha_x = -eta'(x) phi_w and alpha_xx = -phi_w
/// (relative deviations, O(fd_h^2)) plus the scaled derivative ratios
/// |a_t|/(T~ p^2), |a_xt|/(T~ p^2), |a_tt|/(T~^2 p^3), which stay bounded
/// uniformly in t.
struct WeightIdentityReport {
    double max_rel_alpha_x;
    double max_rel_alpha_xx;
    double max_ratio_alpha_t;
    double max_ratio_alpha_xt;
    double max_ratio_alpha_tt;
};

WeightIdentityReport check_weight_identities(const CarlemanWeights& w,
                                             int x_samples = 41,
                                             int t_samples = 33,
                                             double fd_h = 1e-3);

/// s >= sigma * (eps*T + eps^2*T^2); sigma stands in for the inequality's
/// non-constructive constant.
double s_threshold(const PhysParams& params, double sigma);

/// Scaled-form threshold sigma * (T~ + T~^2 + T~^2/eps + eps^{1/3} T~^{2/3}).
double s_threshold_scaled(const PhysParams& params, double sigma);

struct CarlemanRatio {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool rhs_underflow = false;
    bool rhs_overflow = false;
    bool zero_over_zero = false;
};

/// Quadrature of both sides of the boundary Carleman inequality on a computed
/// backward history. Exponentials are evaluated in log space and clamped at
/// exponent -700; the weight limits at t = 0, T are zero and are used as the
/// endpoint quadrature values.
CarlemanRatio inequality_ratio(const CarlemanWeights& w,
                               const SpaceTimeField& phi, const Grid1D& grid,
                               const TimeGrid& tg);

} // namespace advdiff
