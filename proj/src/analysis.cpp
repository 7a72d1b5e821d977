#include "omstirap/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace omstirap {

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteSplit& split) {
    const HilbertSpace& space = rho.space();
    const std::size_t modes = space.mode_count();
    if (split.kept_modes.empty()) throw Error(ErrorKind::invalid_argument, "partial_trace: kept set is empty");
    std::vector<bool> kept(modes, false);
    for (std::size_t m : split.kept_modes) {
        if (m >= modes || kept[m]) throw Error(ErrorKind::invalid_argument, "partial_trace: bad kept mode list");
        kept[m] = true;
    }

    std::vector<int> out_dims;
    for (std::size_t m : split.kept_modes) out_dims.push_back(space.dim(m));
    HilbertSpace out_space(out_dims);
    const auto n_out = out_space.total_dim();
    Matrix out = Matrix::Zero(n_out, n_out);

    // Map each full basis index to (kept index, traced multi-index key).
    const auto n = space.total_dim();
    std::vector<Eigen::Index> kept_idx(n), traced_key(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto occ = space.multi_index(i);
        Eigen::Index k = 0, tkey = 0;
        for (std::size_t m : split.kept_modes) k = k * space.dim(m) + occ[m];
        for (std::size_t m = 0; m < modes; ++m) {
            if (!kept[m]) tkey = tkey * space.dim(m) + occ[m];
        }
        kept_idx[i] = k;
        traced_key[i] = tkey;
    }
    const Matrix& r = rho.matrix();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (traced_key[i] == traced_key[j]) out(kept_idx[i], kept_idx[j]) += r(i, j);
        }
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(std::move(out_space), std::move(out), SAMPLE_TOLERANCES);
}

DensityMatrix mechanical_state(const DensityMatrix& rho) {
    if (rho.space().mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "mechanical_state: need 3 modes");
    return partial_trace(rho, {{mech1, mech2}});
}

Matrix partial_transpose(const Matrix& rho, int d1, int d2) {
    if (rho.rows() != d1 * d2 || rho.cols() != d1 * d2) {
        throw Error(ErrorKind::invalid_dimension, "partial_transpose: shape mismatch");
    }
    Matrix out(rho.rows(), rho.cols());
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
            for (int k = 0; k < d1; ++k)
                for (int l = 0; l < d2; ++l) out(i * d2 + j, k * d2 + l) = rho(i * d2 + l, k * d2 + j);
    return out;
}

double negativity(const DensityMatrix& rho12) {
    const HilbertSpace& s = rho12.space();
    if (s.mode_count() != 2) throw Error(ErrorKind::invalid_dimension, "negativity: need a two-mode state");
    const Matrix& r = rho12.matrix();
    if (hermiticity_defect(r) > 1e-8) throw Error(ErrorKind::invalid_state, "negativity: input is not Hermitian");
    Matrix pt = partial_transpose(r, s.dim(0), s.dim(1));
    pt = 0.5 * (pt + pt.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt, Eigen::EigenvaluesOnly);
    const double norm1 = es.eigenvalues().cwiseAbs().sum();
    return std::max(0.0, 0.5 * (norm1 - 1.0));
}

namespace {

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
    if (!(rho.space() == target.space())) throw Error(ErrorKind::invalid_dimension, "fidelity: space mismatch");
    // Tr sqrt(sqrt(rho) sigma sqrt(rho)) = || sqrt(rho) sqrt(sigma) ||_1; the singular
    // values avoid square roots of round-off eigenvalues near zero.
    const Matrix prod = psd_sqrt(rho.matrix()) * psd_sqrt(target.matrix());
    Eigen::JacobiSVD<Matrix> svd(prod);
    const double tr = svd.singularValues().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
    if (!(rho.space() == target.space())) throw Error(ErrorKind::invalid_dimension, "fidelity: space mismatch");
    const Vector& v = target.amplitudes();
    return std::clamp(v.dot(rho.matrix() * v).real(), 0.0, 1.0);
}

Eigen::MatrixXd wigner_single_mode(const DensityMatrix& rho_mode, const std::vector<double>& x_grid,
                                   const std::vector<double>& p_grid) {
    if (rho_mode.space().mode_count() != 1) throw Error(ErrorKind::invalid_dimension, "wigner: need a single mode");
    const Matrix& r = rho_mode.matrix();
    const int d = static_cast<int>(r.rows());

    // sqrt(m!/n!) for m <= n
    Eigen::MatrixXd fact_ratio = Eigen::MatrixXd::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = m; n < d; ++n) fact_ratio(m, n) = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));

    Eigen::MatrixXd w(x_grid.size(), p_grid.size());
    std::vector<double> lag(d);
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
        for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
            const cplx a = cplx(x_grid[ix], p_grid[ip]) / std::sqrt(2.0);
            const double b = 4.0 * std::norm(a);
            double sum = 0.0;
            for (int k = 0; k < d; ++k) {
                // generalized Laguerre L_m^{(k)}(b) for m = 0..d-1-k
                const int mmax = d - 1 - k;
                lag[0] = 1.0;
                if (mmax >= 1) lag[1] = 1.0 + k - b;
                for (int j = 1; j < mmax; ++j) lag[j + 1] = ((2.0 * j + 1.0 + k - b) * lag[j] - (j + k) * lag[j - 1]) / (j + 1.0);
                const cplx pw = std::pow(2.0 * a, k);
                for (int m = 0; m <= mmax; ++m) {
                    const int n = m + k;
                    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                    if (k == 0) {
                        sum += sign * r(m, m).real() * lag[m];
                    } else {
                        sum += 2.0 * sign * fact_ratio(m, n) * lag[m] * (r(m, n) * pw).real();
                    }
                }
            }
            w(ix, ip) = sum * std::exp(-0.5 * b) / PI;
        }
    }
    return w;
}

DensityMatrix antisymmetric_mode_state(const DensityMatrix& rho12, double g1, double g2) {
    const HilbertSpace& s = rho12.space();
    if (s.mode_count() != 2) throw Error(ErrorKind::invalid_dimension, "antisymmetric_mode_state: need two modes");
    const double norm = std::hypot(g1, g2);
    if (norm == 0.0) throw Error(ErrorKind::undefined_mode, "antisymmetric_mode_state: both couplings are zero");
    const double chi = std::atan2(g1, g2);
    const Operator b1 = annihilation(s, 0), b2 = annihilation(s, 1);
    // U^dag b1 U = cos(chi) b1 - sin(chi) b2
    const Matrix k = (b2.adjoint() * b1 - b1.adjoint() * b2).matrix();
    const Matrix u = (chi * k).exp();
    Matrix rotated = u * rho12.matrix() * u.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    const DensityMatrix r(s, rotated, SAMPLE_TOLERANCES);
    return partial_trace(r, {{0}});
}

std::pair<double, double> collective_populations(const DensityMatrix& rho, const SystemParams& params) {
    const auto modes = collective_operators(params, {}, 0.0, ModeConvention::static_couplings, rho.space());
    const Operator np = modes.b_plus.adjoint() * modes.b_plus;
    const Operator nm = modes.b_minus.adjoint() * modes.b_minus;
    return {expectation(np, rho).real(), expectation(nm, rho).real()};
}

} // namespace omstirap
