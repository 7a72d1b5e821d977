#include "omstirap/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace omstirap {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_state: return "invalid-state";
    case ErrorKind::undefined_mode: return "undefined-mode";
    case ErrorKind::domain: return "domain";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::diverged: return "integration-diverged";
    case ErrorKind::oracle_too_large: return "oracle-too-large";
    case ErrorKind::undefined_steady_state: return "undefined-steady-state";
    case ErrorKind::config: return "config";
    }
    return "unknown";
}

// --------------------------- HilbertSpace -----------------------------------

HilbertSpace::HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty() || dims_.size() > 3) {
        throw Error(ErrorKind::invalid_dimension, "HilbertSpace: between one and three modes required");
    }
    total_ = 1;
    for (int d : dims_) {
        if (d < 2) {
            throw Error(ErrorKind::invalid_dimension, "HilbertSpace: every mode dimension must be >= 2");
        }
        total_ *= d;
    }
}

int HilbertSpace::dim(std::size_t mode) const {
    if (mode >= dims_.size()) {
        throw Error(ErrorKind::invalid_dimension, "HilbertSpace: mode index out of range");
    }
    return dims_[mode];
}

std::vector<int> HilbertSpace::multi_index(Eigen::Index index) const {
    if (index < 0 || index >= total_) {
        throw Error(ErrorKind::out_of_range, "HilbertSpace: basis index out of range");
    }
    std::vector<int> occ(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        occ[k] = static_cast<int>(index % dims_[k]);
        index /= dims_[k];
    }
    return occ;
}

Eigen::Index HilbertSpace::index(std::span<const int> occupations) const {
    if (occupations.size() != dims_.size()) {
        throw Error(ErrorKind::invalid_dimension, "HilbertSpace: occupation count does not match mode count");
    }
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (occupations[k] < 0 || occupations[k] >= dims_[k]) {
            throw Error(ErrorKind::out_of_range, "HilbertSpace: occupation outside truncated mode");
        }
        idx = idx * dims_[k] + occupations[k];
    }
    return idx;
}

// --------------------------- Operator ---------------------------------------

Operator::Operator(HilbertSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto n = space_.total_dim();
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw Error(ErrorKind::invalid_dimension, "Operator: matrix shape does not match space");
    }
}

Operator Operator::identity(const HilbertSpace& space) {
    return Operator(space, Matrix::Identity(space.total_dim(), space.total_dim()));
}

Operator Operator::zero(const HilbertSpace& space) {
    return Operator(space, Matrix::Zero(space.total_dim(), space.total_dim()));
}

Operator Operator::adjoint() const { return Operator(space_, matrix_.adjoint()); }

Operator& Operator::operator+=(const Operator& other) {
    if (!(space_ == other.space_)) throw Error(ErrorKind::invalid_dimension, "Operator: space mismatch");
    matrix_ += other.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    if (!(space_ == other.space_)) throw Error(ErrorKind::invalid_dimension, "Operator: space mismatch");
    matrix_ -= other.matrix_;
    return *this;
}

Operator& Operator::operator*=(cplx scale) {
    matrix_ *= scale;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.space() == rhs.space())) throw Error(ErrorKind::invalid_dimension, "Operator: space mismatch");
    return Operator(lhs.space(), lhs.matrix() * rhs.matrix());
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// --------------------------- States -----------------------------------------

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != space_.total_dim()) {
        throw Error(ErrorKind::invalid_dimension, "StateVector: length does not match space");
    }
    if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::invalid_state, "StateVector: amplitudes are not unit norm");
    }
}

StateVector StateVector::normalized(HilbertSpace space, Vector amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw Error(ErrorKind::invalid_state, "StateVector: zero vector");
    return StateVector(std::move(space), amplitudes / n);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix matrix, const StateTolerances& tol)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto n = space_.total_dim();
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw Error(ErrorKind::invalid_dimension, "DensityMatrix: matrix shape does not match space");
    }
    if (const double h = hermiticity_defect(matrix_); h > tol.hermiticity) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (defect " << h << ")";
        throw Error(ErrorKind::invalid_state, os.str());
    }
    if (const double tr = matrix_.trace().real(); std::abs(tr - 1.0) > tol.trace) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr << " differs from 1";
        throw Error(ErrorKind::invalid_state, os.str());
    }
    const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (const double lo = es.eigenvalues().minCoeff(); lo < -tol.positivity) {
        std::ostringstream os;
        os << "DensityMatrix: negative eigenvalue " << lo;
        throw Error(ErrorKind::invalid_state, os.str());
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    const Vector& v = psi.amplitudes();
    return DensityMatrix(psi.space(), v * v.adjoint());
}

// --------------------------- Ladder algebra ---------------------------------

Matrix ladder(int dim, Ladder kind) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "ladder: dim must be >= 2");
    Matrix a = Matrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    if (kind == Ladder::raise) return a.adjoint();
    return a;
}

Matrix number_matrix(int dim) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "number_matrix: dim must be >= 2");
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator embed(const HilbertSpace& space, std::size_t mode_index, const Matrix& local) {
    const int d = space.dim(mode_index);
    if (local.rows() != d || local.cols() != d) {
        throw Error(ErrorKind::invalid_dimension, "embed: local operator dimension does not match mode");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < space.mode_count(); ++k) {
        const int dk = space.dim(k);
        out = kron(out, k == mode_index ? local : Matrix(Matrix::Identity(dk, dk)));
    }
    return Operator(space, std::move(out));
}

Operator annihilation(const HilbertSpace& space, std::size_t mode_index) {
    return embed(space, mode_index, ladder(space.dim(mode_index), Ladder::lower));
}

Operator number_operator(const HilbertSpace& space, std::size_t mode_index) {
    return embed(space, mode_index, number_matrix(space.dim(mode_index)));
}

// --------------------------- State factories --------------------------------

StateVector fock_state(const HilbertSpace& space, std::span<const int> occupations) {
    Vector v = Vector::Zero(space.total_dim());
    v(space.index(occupations)) = 1.0;
    return StateVector(space, std::move(v));
}

StateVector fock_state(const HilbertSpace& space, int n_c, int n1, int n2) {
    const int occ[3] = {n_c, n1, n2};
    return fock_state(space, std::span<const int>(occ, 3));
}

namespace {

void check_tail(double tail, const char* who) {
    if (tail > 1e-2) {
        std::ostringstream os;
        os << who << ": truncated tail mass " << tail << " exceeds 1e-2";
        throw Error(ErrorKind::truncation, os.str());
    }
}

} // namespace

Truncated<StateVector> coherent_state_truncated(int dim, cplx alpha) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "coherent_state: dim must be >= 2");
    Vector c(dim);
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!), built by recurrence.
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double kept = c.squaredNorm();
    const double tail = std::max(0.0, 1.0 - kept);
    check_tail(tail, "coherent_state");
    return {StateVector::normalized(HilbertSpace({dim}), std::move(c)), tail};
}

StateVector coherent_state(int dim, cplx alpha) { return coherent_state_truncated(dim, alpha).value; }

Truncated<DensityMatrix> thermal_state_truncated(int dim, double nbar) {
    if (dim < 2) throw Error(ErrorKind::invalid_dimension, "thermal_state: dim must be >= 2");
    if (!(nbar >= 0.0)) throw Error(ErrorKind::invalid_argument, "thermal_state: nbar must be >= 0");
    const double q = nbar / (1.0 + nbar);
    Eigen::VectorXd p(dim);
    double pn = 1.0 / (1.0 + nbar);
    for (int n = 0; n < dim; ++n) {
        p(n) = pn;
        pn *= q;
    }
    const double tail = std::max(0.0, 1.0 - p.sum());
    check_tail(tail, "thermal_state");
    p /= p.sum();
    Matrix rho = Matrix::Zero(dim, dim);
    rho.diagonal() = p.cast<cplx>();
    return {DensityMatrix(HilbertSpace({dim}), std::move(rho)), tail};
}

DensityMatrix thermal_state(int dim, double nbar) { return thermal_state_truncated(dim, nbar).value; }

DensityMatrix tensor_product(std::span<const DensityMatrix> factors) {
    if (factors.empty()) throw Error(ErrorKind::invalid_argument, "tensor_product: no factors");
    std::vector<int> dims;
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) {
        for (int d : f.space().dims()) dims.push_back(d);
        out = kron(out, f.matrix());
    }
    return DensityMatrix(HilbertSpace(std::move(dims)), std::move(out));
}

StateVector tensor_product(std::span<const StateVector> factors) {
    if (factors.empty()) throw Error(ErrorKind::invalid_argument, "tensor_product: no factors");
    std::vector<int> dims;
    Matrix out = Matrix::Identity(1, 1);
    for (const auto& f : factors) {
        for (int d : f.space().dims()) dims.push_back(d);
        out = kron(out, f.amplitudes());
    }
    return StateVector::normalized(HilbertSpace(std::move(dims)), out.col(0));
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
    if (!(op.space() == rho.space())) throw Error(ErrorKind::invalid_dimension, "expectation: space mismatch");
    // Tr(A rho) without forming the product.
    return (op.matrix().transpose().cwiseProduct(rho.matrix())).sum();
}

cplx expectation(const Operator& op, const StateVector& psi) {
    if (!(op.space() == psi.space())) throw Error(ErrorKind::invalid_dimension, "expectation: space mismatch");
    return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

} // namespace omstirap
