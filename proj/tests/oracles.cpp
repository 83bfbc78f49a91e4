#include "oracles.hpp"

namespace advdiff::testing {

Eigen::MatrixXd dense_matrix(const TridiagMatrix& a) {
    const int n = a.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = a.diag[i];
        if (i > 0) m(i, i - 1) = a.lower[i];
        if (i < n - 1) m(i, i + 1) = a.upper[i];
    }
    return m;
}

Eigen::MatrixXd hand_assembled_k(const Grid1D& grid, double eps) {
    const int n = grid.nx() + 1;
    const double h = grid.h();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    const double sloc[2][2] = {{1.0 / h, -1.0 / h}, {-1.0 / h, 1.0 / h}};
    const double aloc[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
    for (int e = 0; e < grid.nx(); ++e)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                k(e + r, e + c) += eps * sloc[r][c] + aloc[r][c];
    k(0, 0) += 1.0;
    return k;
}

StateField expm_apply(const SemidiscreteSystem& sys, double horizon,
                      const StateField& u0) {
    const int n = sys.K.size();
    Eigen::MatrixXd a = dense_matrix(sys.K);
    for (int i = 0; i < n; ++i) a.row(i) /= sys.mass.weights[i];

    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::VectorXcd lam = es.eigenvalues();
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::VectorXcd c =
        v.partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(u0.data(), n)
                                   .cast<std::complex<double>>());
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    for (int i = 0; i < n; ++i)
        out += c(i) * std::exp(-horizon * lam(i)) * v.col(i);

    StateField result(n);
    for (int i = 0; i < n; ++i) result[i] = out(i).real();
    return result;
}

} // namespace advdiff::testing
