#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "advdiff/errors.hpp"

namespace advdiff {

/// Boundary parts of the interval (-L, 0). Gamma1 is the inflow end x = -L
/// (node 0), Gamma0 the outflow end x = 0 (node nx).
enum class Boundary { gamma1_left, gamma0_right };

/// Nodal values on a Grid1D, length nx+1. The endpoint entries double as the
/// boundary traces.
using StateField = std::vector<double>;

/// Physical configuration: domain length, time horizon, viscosity, and the
/// boundary part through which the control acts.
struct PhysParams {
    double L = 1.0;
    double T = 1.0;
    double eps = 1.0;
    Boundary control_side = Boundary::gamma0_right;

    void validate() const; // throws PreconditionError
};

/// Uniform nodes x_j = -L + j*h on [-L, 0], j = 0..nx.
class Grid1D {
public:
    Grid1D(double length, int nx);

    double length() const { return length_; }
    int nx() const { return nx_; }
    double h() const { return h_; }
    double node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
    std::span<const double> nodes() const { return nodes_; }

private:
    double length_;
    int nx_;
    double h_;
    std::vector<double> nodes_;
};

/// Uniform time levels t_n = n*dt on [0, T], n = 0..nt.
class TimeGrid {
public:
    TimeGrid(double horizon, int nt);

    double horizon() const { return horizon_; }
    int nt() const { return nt_; }
    double dt() const { return dt_; }
    double level(int n) const { return dt_ * n; }

    /// Right-endpoint quadrature weights (w_0 = 0, w_n = dt otherwise).
    /// These are the weights under which the implicit Euler scheme and its
    /// transpose pair exactly; see duality_residual.
    std::vector<double> quad_weights() const;

private:
    double horizon_;
    int nt_;
    double dt_;
};

/// Diagonal weights realizing the discrete X inner product: lumped interior
/// mass plus an eps-mass on each boundary node. Sums to L + 2*eps.
struct XProduct {
    std::vector<double> weights;
};

/// eps >= 0 is accepted; eps = 0 degenerates to the plain lumped L2 product.
XProduct build_x_product(const Grid1D& grid, double eps);

double x_inner(std::span<const double> a, std::span<const double> b,
               const XProduct& xp);
double x_norm(std::span<const double> a, const XProduct& xp);

/// Full solution history, (nt+1) x (nx+1) row-major; row n is the state at
/// time level n.
class SpaceTimeField {
public:
    SpaceTimeField(int nt, int nx);

    int nt() const { return nt_; }
    int nx() const { return nx_; }
    std::span<double> row(int n);
    std::span<const double> row(int n) const;
    double at(int n, int j) const {
        return data_[static_cast<std::size_t>(n) * (nx_ + 1) + j];
    }
    double& at(int n, int j) {
        return data_[static_cast<std::size_t>(n) * (nx_ + 1) + j];
    }
    std::span<const double> data() const { return data_; }

private:
    int nt_;
    int nx_;
    std::vector<double> data_;
};

/// Scalar time series at one boundary node, one value per time level.
struct BoundaryTrace {
    Boundary side = Boundary::gamma0_right;
    std::vector<double> values;
};

/// Time quadrature of the squared trace with the TimeGrid's weights.
double trace_l2_sq(const BoundaryTrace& tr, const TimeGrid& tg);

int boundary_node(Boundary side, int nx);

} // namespace advdiff
