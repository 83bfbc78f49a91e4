#pragma once

#include <Eigen/Dense>

#include "advdiff/adjoint.hpp"

namespace advdiff {

/// Which evolution is observed and where. The adjoint/Gamma0 configuration is
/// the one the control cost is built on; direct/Gamma1 is the ill-posed
/// initial-data reconstruction.
enum class ObsProblem { adjoint, direct };

struct ObsConfig {
    ObsProblem problem = ObsProblem::adjoint;
    Boundary obs_node = Boundary::gamma0_right;
    double delta = -1.0; // regularization of the trace form; < 0 selects
                         // 1e-14 * trace(G_trace) / n
};

/// The two quadratic forms of the observability quotient, in terminal-data
/// (adjoint) or initial-data (direct) nodal coordinates: G_init realizes the
/// observed-state norm squared, G_trace the boundary-trace quadrature.
struct QuadraticForms {
    Eigen::MatrixXd g_init;
    Eigen::MatrixXd g_trace;
};

/// Dense assembly by one PDE solve per basis vector; refuses instances above
/// `dense_cap` unknowns.
QuadraticForms assemble_quadratic_forms(const SemidiscreteSystem& sys,
                                        const TimeGrid& tg, const ObsConfig& cfg,
                                        int dense_cap = 257);

enum class EigMethod { dense, power_iteration };

/// sqrt of the largest generalized eigenvalue of
///   G_init x = lambda (G_trace + delta I) x.
double observability_constant_from_forms(const QuadraticForms& forms,
                                         double delta,
                                         EigMethod method = EigMethod::dense);

double resolve_delta(const QuadraticForms& forms, double delta);

double observability_constant(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const ObsConfig& cfg,
                              EigMethod method = EigMethod::dense,
                              int dense_cap = 257);

struct SweepPoint {
    int nx;
    double kappa;
};

/// Observability constant of one configuration across spatial resolutions,
/// nt = nt_per_nx * nx each. The direct/Gamma1 constant grows without bound
/// under refinement; the adjoint/Gamma0 one stays mesh-stable.
std::vector<SweepPoint> illposedness_sweep(const PhysParams& params,
                                           const std::vector<int>& nx_list,
                                           const ObsConfig& cfg,
                                           double theta = 1.0,
                                           int nt_per_nx = 25);

} // namespace advdiff
