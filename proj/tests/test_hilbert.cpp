#include "omstirap/hilbert.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace omstirap;

TEST(Ladder, LowerMatchesDefinition) {
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 1) = 1.0;
    expected(1, 2) = std::sqrt(2.0);
    EXPECT_EQ(ladder(3, Ladder::lower), expected);
}

TEST(Ladder, RaiseIsConjugateTranspose) {
    Matrix expected = Matrix::Zero(2, 2);
    expected(1, 0) = 1.0;
    EXPECT_EQ(ladder(2, Ladder::raise), expected);
}

TEST(Ladder, TruncatedCommutator) {
    for (int d = 2; d <= 8; ++d) {
        const Matrix a = ladder(d, Ladder::lower);
        const Matrix ad = ladder(d, Ladder::raise);
        Matrix expected = Matrix::Identity(d, d);
        expected(d - 1, d - 1) = -(d - 1);
        EXPECT_LT(max_abs(a * ad - ad * a - expected), 1e-14) << "d=" << d;
    }
}

TEST(Ladder, RejectsTinyDimension) {
    try {
        ladder(1, Ladder::lower);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
    }
}

TEST(HilbertSpace, IndexRoundTrip) {
    HilbertSpace s({2, 3, 4});
    EXPECT_EQ(s.total_dim(), 24);
    for (Eigen::Index i = 0; i < s.total_dim(); ++i) EXPECT_EQ(s.index(s.multi_index(i)), i);
    // row-major, cavity leftmost
    EXPECT_EQ(s.index(std::vector<int>{1, 0, 0}), 12);
    EXPECT_EQ(s.index(std::vector<int>{0, 1, 0}), 4);
    EXPECT_EQ(s.index(std::vector<int>{0, 0, 1}), 1);
}

TEST(HilbertSpace, RejectsBadDims) {
    EXPECT_THROW(HilbertSpace({2, 1, 2}), Error);
    EXPECT_THROW(HilbertSpace(std::vector<int>{}), Error);
}

TEST(Embed, CavityLoweringIsTraceless) {
    HilbertSpace s({2, 2, 2});
    const Operator a = embed(s, cavity, ladder(2, Ladder::lower));
    EXPECT_EQ(a.matrix().rows(), 8);
    EXPECT_EQ(a.matrix().trace(), cplx(0.0));
    // a|1,0,0> = |0,0,0>
    const auto v = a.matrix() * fock_state(s, 1, 0, 0).amplitudes();
    EXPECT_NEAR(std::abs(v(s.index(std::vector<int>{0, 0, 0})) - 1.0), 0.0, 1e-15);
}

TEST(Embed, IdentityEmbedsToIdentity) {
    HilbertSpace s({2, 3, 3});
    EXPECT_EQ(embed(s, mech1, Matrix::Identity(3, 3)).matrix(), Matrix::Identity(18, 18));
}

TEST(Embed, DistinctModesCommute) {
    HilbertSpace s({2, 4, 3});
    const Operator b1 = annihilation(s, mech1);
    const Operator b2 = annihilation(s, mech2);
    EXPECT_EQ(max_abs(commutator(b1, b2).matrix()), 0.0);
    EXPECT_EQ(max_abs(commutator(b1, b2.adjoint()).matrix()), 0.0);
}

TEST(Embed, PreservesOperatorNorm) {
    HilbertSpace s({3, 4, 2});
    const Matrix local = ladder(4, Ladder::lower);
    const Operator e = embed(s, mech1, local);
    Eigen::JacobiSVD<Matrix> a(local), b(e.matrix());
    EXPECT_NEAR(a.singularValues()(0), b.singularValues()(0), 1e-12);
}

TEST(Embed, DimensionMismatch) {
    HilbertSpace s({2, 3, 3});
    try {
        embed(s, mech1, ladder(4, Ladder::lower));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
    }
}

TEST(States, FockOrthonormal) {
    HilbertSpace s({2, 3, 2});
    for (Eigen::Index i = 0; i < s.total_dim(); ++i) {
        const auto a = fock_state(s, s.multi_index(i)).amplitudes();
        for (Eigen::Index j = 0; j < s.total_dim(); ++j) {
            const auto b = fock_state(s, s.multi_index(j)).amplitudes();
            EXPECT_EQ(a.dot(b), cplx(i == j ? 1.0 : 0.0));
        }
    }
}

TEST(States, FockOutOfRange) {
    HilbertSpace s({2, 3, 3});
    try {
        fock_state(s, 0, 3, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::out_of_range);
    }
}

TEST(States, CoherentVacuum) {
    const auto v = coherent_state(10, 0.0).amplitudes();
    EXPECT_NEAR(std::abs(v(0)), 1.0, 1e-15);
    EXPECT_NEAR(v.tail(9).norm(), 0.0, 1e-15);
}

TEST(States, CoherentAmplitudesAndTail) {
    const cplx alpha(0.8, -0.3);
    const auto tr = coherent_state_truncated(12, alpha);
    // independent series: |c_n|^2 Poisson weights
    double kept = 0.0, fact = 1.0;
    for (int n = 0; n < 12; ++n) {
        if (n > 0) fact *= n;
        kept += std::exp(-std::norm(alpha)) * std::pow(std::norm(alpha), n) / fact;
    }
    EXPECT_NEAR(tr.tail_mass, 1.0 - kept, 1e-14);
    const cplx expected1 = std::exp(-0.5 * std::norm(alpha)) * alpha / std::sqrt(kept);
    EXPECT_NEAR(std::abs(tr.value.amplitudes()(1) - expected1), 0.0, 1e-14);
    // <a> ~ alpha
    const Operator a(HilbertSpace({12}), ladder(12, Ladder::lower));
    EXPECT_NEAR(std::abs(expectation(a, tr.value) - alpha), 0.0, 1e-6);
}

TEST(States, CoherentTruncationError) {
    try {
        coherent_state(3, 2.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::truncation);
    }
}

TEST(States, ThermalZeroTemperature) {
    const auto rho = thermal_state(5, 0.0);
    Matrix expected = Matrix::Zero(5, 5);
    expected(0, 0) = 1.0;
    EXPECT_EQ(rho.matrix(), expected);
}

TEST(States, ThermalGeometricWeights) {
    const auto tr = thermal_state_truncated(5, 0.5);
    const double q = 0.5 / 1.5;
    const double raw[5] = {2.0 / 3, 2.0 / 3 * q, 2.0 / 3 * q * q, 2.0 / 3 * q * q * q, 2.0 / 3 * q * q * q * q};
    double kept = 0.0;
    for (double p : raw) kept += p;
    EXPECT_NEAR(raw[0], 0.667, 5e-4);
    EXPECT_NEAR(raw[1], 0.222, 5e-4);
    EXPECT_NEAR(raw[2], 0.074, 5e-4);
    EXPECT_NEAR(raw[3], 0.025, 5e-4);
    EXPECT_NEAR(raw[4], 0.008, 5e-4);
    for (int n = 0; n < 5; ++n) EXPECT_NEAR(tr.value.matrix()(n, n).real(), raw[n] / kept, 1e-14);
    EXPECT_NEAR(tr.tail_mass, 1.0 - kept, 1e-14);
    EXPECT_NEAR(tr.value.matrix().trace().real(), 1.0, 1e-12);
}

TEST(States, ThermalMeanOccupation) {
    const auto rho = thermal_state(20, 0.5);
    const Operator n(HilbertSpace({20}), number_matrix(20));
    EXPECT_NEAR(expectation(n, rho).real(), 0.5, 1e-6);
}

TEST(Expectation, NumberOnFock) {
    HilbertSpace s({2, 3, 3});
    EXPECT_EQ(expectation(number_operator(s, mech1), fock_state(s, 0, 1, 0)), cplx(1.0));
}

TEST(Expectation, NumberOnBellState) {
    HilbertSpace s({2, 3, 3});
    const Vector psi = (fock_state(s, 0, 1, 0).amplitudes() - fock_state(s, 0, 0, 1).amplitudes()) / std::sqrt(2.0);
    const auto rho = DensityMatrix::pure(StateVector(s, psi));
    const cplx v = expectation(number_operator(s, mech2), rho);
    EXPECT_NEAR(v.real(), 0.5, 1e-15);
    EXPECT_LT(std::abs(v.imag()), 1e-9);
}

TEST(Expectation, SpaceMismatch) {
    try {
        expectation(number_operator(HilbertSpace({2, 3, 3}), mech1), fock_state(HilbertSpace({2, 2, 3}), 0, 1, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
    }
}

TEST(DensityMatrix, RejectsInvalid) {
    HilbertSpace s({2});
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.5;
    EXPECT_THROW(DensityMatrix(s, m), Error);   // trace
    m(1, 1) = 0.5;
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(s, m), Error);   // hermiticity
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    m(0, 1) = 0.0;
    EXPECT_THROW(DensityMatrix(s, m), Error);   // positivity
}

TEST(TensorProduct, MatchesKron) {
    const auto a = thermal_state(3, 0.2);
    const auto b = DensityMatrix::pure(coherent_state(4, 0.3));
    const DensityMatrix f[] = {a, b};
    const auto p = tensor_product(f);
    EXPECT_EQ(p.space(), HilbertSpace({3, 4}));
    EXPECT_LT(max_abs(p.matrix() - kron(a.matrix(), b.matrix())), 1e-15);
}
