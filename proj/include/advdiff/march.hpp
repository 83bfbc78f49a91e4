#pragma once

#include "advdiff/assembly.hpp"

namespace advdiff {

/// One-step propagator for (M + theta*dt*A) u_next = (M - (1-theta)*dt*A) u
/// + dt*((1-theta)*load_departure + theta*load_arrival), with A = K or K^T.
/// The Thomas factorization of the left-hand matrix is computed once. The
/// same load convention serves the backward adjoint march: "departure" is
/// the level the step leaves from, "arrival" the level it produces.
class ThetaStepper {
public:
    ThetaStepper(const SemidiscreteSystem& sys, double dt, bool transpose_k);

    void advance(std::span<const double> from, std::span<const double> load_departure,
                 std::span<const double> load_arrival, std::span<double> to) const;

    /// Homogeneous step (no loads).
    void advance(std::span<const double> from, std::span<double> to) const;

    double dt() const { return dt_; }

private:
    void solve_inplace(std::span<double> rhs) const;

    double dt_;
    double theta_;
    std::vector<double> mass_;
    TridiagMatrix a_;        // K or K^T
    // Thomas factorization of S = M + theta*dt*A
    std::vector<double> fac_diag_, fac_mult_;
};

struct ForwardSolution {
    SpaceTimeField history;

    StateField terminal() const;
    BoundaryTrace trace(Boundary side) const; // raw level-indexed trace
};

/// Single theta-step; factors the system matrix on each call. load_n and
/// load_np1 are full nodal load vectors at the two surrounding levels.
StateField step(const SemidiscreteSystem& sys, const StateField& u_n,
                std::span<const double> load_n, std::span<const double> load_np1,
                double dt);

/// March (S_{f,g0,g1}) with an optional control v injected at the system's
/// control node. Any of f, g0, g1, v may be null (interpreted as zero).
ForwardSolution solve_forward(const SemidiscreteSystem& sys, const TimeGrid& tg,
                              const StateField& u0,
                              const SpaceTimeField* f = nullptr,
                              const BoundaryTrace* g0 = nullptr,
                              const BoundaryTrace* g1 = nullptr,
                              const BoundaryTrace* v = nullptr);

} // namespace advdiff
