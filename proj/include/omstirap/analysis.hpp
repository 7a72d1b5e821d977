// analysis.hpp: partial trace, negativity, fidelity, Wigner functions, collective populations

#pragma once

#include "omstirap/hilbert.hpp"
#include "omstirap/model.hpp"

#include <utility>
#include <vector>

namespace omstirap {

struct BipartiteSplit {
    std::vector<std::size_t> kept_modes;   // in output order
};

// Trace out every mode not listed in split.kept_modes.
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteSplit& split);

// Reduced state of the two mechanical modes (cavity traced out).
DensityMatrix mechanical_state(const DensityMatrix& rho);

// Partial transpose over the second factor of a two-mode matrix.
Matrix partial_transpose(const Matrix& rho, int d1, int d2);

// (||rho^T2||_1 - 1) / 2 from the Hermitian eigenvalues of the partial transpose.
double negativity(const DensityMatrix& rho12);

// Squared Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& target);
double fidelity(const DensityMatrix& rho, const StateVector& target);

// Wigner function W(x, p) of a single-mode state, with a = (x + i p)/sqrt(2),
// so the vacuum is exp(-x^2 - p^2)/pi. Rows index x_grid, columns p_grid.
Eigen::MatrixXd wigner_single_mode(const DensityMatrix& rho_mode, const std::vector<double>& x_grid,
                                   const std::vector<double>& p_grid);

// Single-mode state of b_- = (g2 b1 - g1 b2)/sqrt(g1^2 + g2^2) for a two-mode
// state: rotate b_- onto the first factor with a beam-splitter unitary and trace
// out the partner mode. Exact on the subspace n1 + n2 < min(d1, d2).
DensityMatrix antisymmetric_mode_state(const DensityMatrix& rho12, double g1, double g2);

// (<n_+>, <n_->) with the static collective modes.
std::pair<double, double> collective_populations(const DensityMatrix& rho, const SystemParams& params);

} // namespace omstirap
