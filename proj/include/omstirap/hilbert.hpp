// hilbert.hpp: truncated bosonic Fock spaces, ladder operators, and states
//
// Basis ordering is row-major with the cavity as the leftmost tensor factor:
// |n_c, n_1, n_2> has index (n_c * d_1 + n_1) * d_2 + n_2.

#pragma once

#include "omstirap/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace omstirap {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Mode slots of the three-mode optomechanical space.
enum Mode : std::size_t { cavity = 0, mech1 = 1, mech2 = 2 };

class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<int> dims);

    std::span<const int> dims() const noexcept { return dims_; }
    int dim(std::size_t mode) const;
    std::size_t mode_count() const noexcept { return dims_.size(); }
    Eigen::Index total_dim() const noexcept { return total_; }

    std::vector<int> multi_index(Eigen::Index index) const;
    Eigen::Index index(std::span<const int> occupations) const;

    bool operator==(const HilbertSpace& other) const = default;

private:
    std::vector<int> dims_;
    Eigen::Index total_ = 0;
};

// Dense operator on a HilbertSpace.
class Operator {
public:
    Operator() = default;
    Operator(HilbertSpace space, Matrix matrix);

    static Operator identity(const HilbertSpace& space);
    static Operator zero(const HilbertSpace& space);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    Operator adjoint() const;

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(cplx scale);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Operator lhs, cplx s) { return lhs *= s; }
    friend Operator operator*(cplx s, Operator rhs) { return rhs *= s; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

private:
    HilbertSpace space_;
    Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);

class StateVector {
public:
    StateVector() = default;
    // Requires unit norm within 1e-10.
    StateVector(HilbertSpace space, Vector amplitudes);
    // Normalizes the given amplitudes; throws on a zero vector.
    static StateVector normalized(HilbertSpace space, Vector amplitudes);

    const HilbertSpace& space() const noexcept { return space_; }
    const Vector& amplitudes() const noexcept { return amplitudes_; }

private:
    HilbertSpace space_;
    Vector amplitudes_;
};

struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-8;
    double positivity = 1e-8;
};

// Looser floor for integrator output and states derived from it.
inline constexpr StateTolerances SAMPLE_TOLERANCES{1e-9, 1e-6, 1e-6};

class DensityMatrix {
public:
    DensityMatrix() = default;
    // Validates hermiticity, unit trace and positivity against `tol`.
    DensityMatrix(HilbertSpace space, Matrix matrix, const StateTolerances& tol = {});

    static DensityMatrix pure(const StateVector& psi);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }

private:
    HilbertSpace space_;
    Matrix matrix_;
};

// Value plus the probability mass that fell outside the truncated space
// (before renormalization).
template <class T>
struct Truncated {
    T value;
    double tail_mass = 0.0;
};

// Truncated ladder operators on a single mode.
enum class Ladder { lower, raise };
Matrix ladder(int dim, Ladder kind);
Matrix number_matrix(int dim);

Operator embed(const HilbertSpace& space, std::size_t mode_index, const Matrix& local);

// Convenience: embedded annihilation / number operators.
Operator annihilation(const HilbertSpace& space, std::size_t mode_index);
Operator number_operator(const HilbertSpace& space, std::size_t mode_index);

Matrix kron(const Matrix& a, const Matrix& b);

StateVector fock_state(const HilbertSpace& space, std::span<const int> occupations);
StateVector fock_state(const HilbertSpace& space, int n_c, int n1, int n2);

// Tail mass above 1e-2 is a truncation error; smaller tails are renormalized.
Truncated<StateVector> coherent_state_truncated(int dim, cplx alpha);
StateVector coherent_state(int dim, cplx alpha);
Truncated<DensityMatrix> thermal_state_truncated(int dim, double nbar);
DensityMatrix thermal_state(int dim, double nbar);

// Product of single-mode states, leftmost factor first.
DensityMatrix tensor_product(std::span<const DensityMatrix> factors);
StateVector tensor_product(std::span<const StateVector> factors);

cplx expectation(const Operator& op, const DensityMatrix& rho);
cplx expectation(const Operator& op, const StateVector& psi);

double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);

} // namespace omstirap
