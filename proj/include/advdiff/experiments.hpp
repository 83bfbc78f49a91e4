#pragma once

#include <cstdint>

#include "advdiff/carleman.hpp"
#include "advdiff/gramian.hpp"
#include "advdiff/hum.hpp"

namespace advdiff {

/// Shared experiment configuration; the CLI fills it from config file + flags.
struct LabConfig {
    PhysParams phys{};
    int nx = 64;
    int nt = 400;
    double theta = 1.0;
    double beta = 1e-8;
    double sigma = 2.0;
    double delta = -1.0;
    std::uint64_t seed = 42;
    int jobs = 1;
};

struct DissipationRow {
    int trial;
    double norm_t1;
    double norm_t2;
    double bound_factor;
    bool satisfied;
};

/// Backward-dissipation experiment: random terminal data, one row per trial,
/// each checked against exp(-(t2-t1-L)^2 / (4 eps (t2-t1))) with the given
/// discretization slack. Requires t2 - t1 > L and t1, t2 on grid levels.
std::vector<DissipationRow> run_dissipation(const LabConfig& cfg, double t1,
                                            double t2, int trials,
                                            double slack = 1.05);

struct CostSweepRow {
    double eps;
    int nx;
    int nt;
    double c_obs;          // adjoint observability constant at control node
    double control_ratio;  // |v| / |u0|_X for the fixed sin profile
    double terminal_norm;
    bool peclet_ok;        // h <= eps held at this resolution
};

/// Control-cost sweep over viscosities. Rows run concurrently up to
/// cfg.jobs; output order follows eps_list.
std::vector<CostSweepRow> run_cost_sweep(const LabConfig& cfg,
                                         const std::vector<double>& eps_list,
                                         double beta, int nx_base = 48);

struct IllposedRow {
    int nx;
    double kappa_direct_g1;
    double kappa_adjoint_g0;
};

std::vector<IllposedRow> run_illposed(const LabConfig& cfg,
                                      const std::vector<int>& nx_list,
                                      int nt_per_nx = 25);

struct CarlemanRow {
    int trial;
    double lhs;
    double rhs;
    double ratio;
};

struct CarlemanReport {
    double s;
    double cshift;
    WeightIdentityReport identities;
    std::vector<CarlemanRow> rows;
};

/// Weight-identity deviations plus inequality quadrature on random backward
/// solutions at s = s_threshold(sigma).
CarlemanReport run_carleman_report(const LabConfig& cfg, double sigma,
                                   int trials, double cshift = -1.0);

} // namespace advdiff
