#include "advdiff/mesh.hpp"

#include <cmath>

namespace advdiff {

void PhysParams::validate() const {
    if (!(L > 0.0)) throw PreconditionError("PhysParams: L must be positive");
    if (!(T > 0.0)) throw PreconditionError("PhysParams: T must be positive");
    if (!(eps > 0.0 && eps <= 1.0))
        throw PreconditionError("PhysParams: eps must lie in (0, 1]");
}

Grid1D::Grid1D(double length, int nx) : length_(length), nx_(nx) {
    if (!(length > 0.0)) throw PreconditionError("Grid1D: length must be positive");
    if (nx < 2) throw PreconditionError("Grid1D: need at least 2 cells");
    h_ = length / nx;
    nodes_.resize(static_cast<std::size_t>(nx) + 1);
    for (int j = 0; j <= nx; ++j) nodes_[j] = -length + h_ * j;
    nodes_.front() = -length;
    nodes_.back() = 0.0;
}

TimeGrid::TimeGrid(double horizon, int nt) : horizon_(horizon), nt_(nt) {
    if (!(horizon > 0.0)) throw PreconditionError("TimeGrid: horizon must be positive");
    if (nt < 1) throw PreconditionError("TimeGrid: need at least 1 step");
    dt_ = horizon / nt;
}

std::vector<double> TimeGrid::quad_weights() const {
    std::vector<double> w(static_cast<std::size_t>(nt_) + 1, dt_);
    w[0] = 0.0;
    return w;
}

XProduct build_x_product(const Grid1D& grid, double eps) {
    if (eps < 0.0) throw PreconditionError("build_x_product: eps must be >= 0");
    const double h = grid.h();
    std::vector<double> w(static_cast<std::size_t>(grid.nx()) + 1, h);
    w.front() = 0.5 * h + eps;
    w.back() = 0.5 * h + eps;
    return XProduct{std::move(w)};
}

double x_inner(std::span<const double> a, std::span<const double> b,
               const XProduct& xp) {
    if (a.size() != b.size() || a.size() != xp.weights.size())
        throw PreconditionError("x_inner: length mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += xp.weights[j] * a[j] * b[j];
    return s;
}

double x_norm(std::span<const double> a, const XProduct& xp) {
    return std::sqrt(x_inner(a, a, xp));
}

SpaceTimeField::SpaceTimeField(int nt, int nx) : nt_(nt), nx_(nx) {
    if (nt < 0 || nx < 0) throw PreconditionError("SpaceTimeField: negative extent");
    data_.assign(static_cast<std::size_t>(nt + 1) * (nx + 1), 0.0);
}

std::span<double> SpaceTimeField::row(int n) {
    return {data_.data() + static_cast<std::size_t>(n) * (nx_ + 1),
            static_cast<std::size_t>(nx_) + 1};
}

std::span<const double> SpaceTimeField::row(int n) const {
    return {data_.data() + static_cast<std::size_t>(n) * (nx_ + 1),
            static_cast<std::size_t>(nx_) + 1};
}

double trace_l2_sq(const BoundaryTrace& tr, const TimeGrid& tg) {
    if (tr.values.size() != static_cast<std::size_t>(tg.nt()) + 1)
        throw PreconditionError("trace_l2_sq: trace/time grid length mismatch");
    const double dt = tg.dt();
    double s = 0.0;
    for (int n = 1; n <= tg.nt(); ++n) s += dt * tr.values[n] * tr.values[n];
    return s;
}

int boundary_node(Boundary side, int nx) {
    return side == Boundary::gamma1_left ? 0 : nx;
}

} // namespace advdiff
