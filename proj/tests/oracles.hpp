// Test-only oracles, kept independent of the solver code paths they check:
// the matrix exponential goes through a dense eigendecomposition, the hand
// assembly through an explicit element loop, the dense Gramian through
// column-by-column operator application.
#pragma once

#include <Eigen/Dense>

#include "advdiff/assembly.hpp"
#include "advdiff/mesh.hpp"

namespace advdiff::testing {

Eigen::MatrixXd dense_matrix(const TridiagMatrix& a);

/// Independent P1 assembly of eps*K_diff + K_adv + K_gamma1 by looping over
/// elements with the local matrices written out.
Eigen::MatrixXd hand_assembled_k(const Grid1D& grid, double eps);

/// exp(-T M^{-1} K) u0 via dense eigendecomposition of M^{-1} K.
StateField expm_apply(const SemidiscreteSystem& sys, double horizon,
                      const StateField& u0);

} // namespace advdiff::testing
