#include "omstirap/adiabatic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace omstirap;

namespace {

const double G_COUPLING = TWO_PI * 2.5;
const double ALPHA0 = 2000.0;
const double SIGMA = 0.6e-3;

double round2(double x) { return std::round(100.0 * x) / 100.0; }

// Mixing angle for equal couplings with the fractional envelopes.
double theta_of(double theta, double tau, double t) {
    DriveSchedule s;
    s.kind = PulseKind::fractional;
    s.alpha0 = 1.0;
    s.tau = tau;
    s.sigma1 = s.sigma2 = SIGMA;
    s.theta = theta;
    return std::atan2(envelope(s, 1, t), envelope(s, 2, t));
}

double theta_dot(double theta, double tau, double t) {
    const double h = 1e-9;
    return (theta_of(theta, tau, t + h) - theta_of(theta, tau, t - h)) / (2 * h);
}

} // namespace

TEST(Adiabaticity, QuotedWindows) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    const auto stirap = adiabaticity_bounds(PI / 2, SIGMA, SIGMA / 1.43, omega0, 5.0);
    EXPECT_EQ(round2(stirap.tau_over_sigma_lower()), 0.29);
    EXPECT_EQ(round2(stirap.tau_over_sigma_upper()), 0.89);
    EXPECT_TRUE(stirap.satisfied);
    const auto frac = adiabaticity_bounds(PI / 4, SIGMA, SIGMA / 1.25, omega0, 5.0);
    EXPECT_EQ(round2(frac.tau_over_sigma_lower()), 0.35);
    EXPECT_EQ(round2(frac.tau_over_sigma_upper()), 1.18);
}

TEST(Adiabaticity, AsWrittenUpperBound) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    AdiabaticityOptions opt;
    opt.upper_form = UpperBoundForm::as_written;
    const auto a = adiabaticity_bounds(PI / 2, SIGMA, 0.4e-3, omega0, 5.0, opt);
    const auto b = adiabaticity_bounds(PI / 4, SIGMA, 0.4e-3, omega0, 5.0, opt);
    // W0(cos^2/(n_o sin) Omega0 sigma) evaluated independently through W e^W
    const double x = std::cos(PI / 8) * std::cos(PI / 8) / (5.0 * std::sin(PI / 8)) * omega0 * SIGMA;
    const double w = 0.5 * b.upper_bound * b.upper_bound;
    EXPECT_NEAR(w * std::exp(w), x, 1e-10 * x);
    EXPECT_EQ(round2(a.tau_over_sigma_upper()), 0.83);
    EXPECT_EQ(round2(b.tau_over_sigma_upper()), 1.02);
    EXPECT_EQ(a.lower_bound, adiabaticity_bounds(PI / 2, SIGMA, 0.4e-3, omega0, 5.0).lower_bound);
}

TEST(Adiabaticity, PeakRateAndGapMatchEnvelopes) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    for (double theta : {PI / 2, PI / 4, PI / 6}) {
        const double tau = 0.4e-3;
        const auto r = adiabaticity_bounds(theta, SIGMA, tau, omega0, 5.0);
        EXPECT_NEAR(r.theta_dot_max, theta_dot(theta, tau, 0.0), 1e-5 * r.theta_dot_max);
        DriveSchedule s;
        s.kind = PulseKind::fractional;
        s.alpha0 = ALPHA0;
        s.tau = tau;
        s.sigma1 = s.sigma2 = SIGMA;
        s.theta = theta;
        const double omega_numeric = 2.0 * G_COUPLING * std::hypot(envelope(s, 1, 0.0), envelope(s, 2, 0.0));
        EXPECT_NEAR(r.omega_at_zero, omega_numeric, 1e-10 * omega_numeric);
    }
}

TEST(Adiabaticity, ThetaDotWidthMatchesNumericalFwhm) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    for (double theta : {PI / 2, PI / 4}) {
        const double tau = 0.42e-3;
        const auto r = adiabaticity_bounds(theta, SIGMA, tau, omega0, 5.0);
        // half-maximum crossings of d(theta)/dt, located by bisection on each side of its peak
        const double peak = theta_dot(theta, tau, 0.0);
        auto cross = [&](double a, double b) {
            for (int k = 0; k < 100; ++k) {
                const double m = 0.5 * (a + b);
                if (theta_dot(theta, tau, m) > 0.5 * peak) a = m; else b = m;
            }
            return 0.5 * (a + b);
        };
        const double width = cross(0.0, 3 * SIGMA) - cross(0.0, -3 * SIGMA);
        EXPECT_NEAR(r.t_theta_width, width, 1e-5 * width) << theta;
    }
}

TEST(Adiabaticity, ExactOmegaWidth) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    AdiabaticityOptions opt;
    opt.exact_omega_width = true;
    // tau -> 0: Omega(t) is a single Gaussian of FWHM 2 sigma sqrt(ln 2)
    const auto narrow = adiabaticity_bounds(PI / 2, SIGMA, 1e-9, omega0, 5.0, opt);
    EXPECT_NEAR(narrow.t_omega_width, 2 * SIGMA * std::sqrt(std::log(2.0)), 1e-9);
    const auto approx = adiabaticity_bounds(PI / 2, SIGMA, SIGMA / 1.43, omega0, 5.0);
    const auto exact = adiabaticity_bounds(PI / 2, SIGMA, SIGMA / 1.43, omega0, 5.0, opt);
    EXPECT_NEAR(approx.t_omega_width, 2 * SIGMA / 1.43 + 2 * SIGMA * std::sqrt(std::log(2.0)), 1e-15);
    EXPECT_NEAR(exact.t_omega_width / approx.t_omega_width, 1.0, 0.15);
}

TEST(Adiabaticity, Monotonicity) {
    const double omega0 = omega0_from(G_COUPLING, ALPHA0);
    const auto base = adiabaticity_bounds(PI / 3, SIGMA, 0.4e-3, omega0, 5.0);
    const auto stronger = adiabaticity_bounds(PI / 3, SIGMA, 0.4e-3, 2 * omega0, 5.0);
    const auto stricter = adiabaticity_bounds(PI / 3, SIGMA, 0.4e-3, omega0, 10.0);
    EXPECT_EQ(base.lower_bound, stronger.lower_bound);
    EXPECT_EQ(base.lower_bound, stricter.lower_bound);
    EXPECT_GT(stronger.upper_bound, base.upper_bound);
    EXPECT_LT(stricter.upper_bound, base.upper_bound);
    EXPECT_GT(base.t_theta_width, 0.0);
    EXPECT_GT(base.t_omega_width, 0.0);
}

TEST(Adiabaticity, Errors) {
    try {
        adiabaticity_bounds(0.0, SIGMA, 0.4e-3, 1.0, 5.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
    EXPECT_THROW(adiabaticity_bounds(PI / 2, -SIGMA, 0.4e-3, 1.0, 5.0), Error);
    EXPECT_THROW(adiabaticity_bounds(PI, SIGMA, 0.4e-3, 1.0, 5.0), Error);
}

TEST(LambertW, KnownValues) {
    EXPECT_EQ(lambert_w0(0.0), 0.0);
    EXPECT_NEAR(lambert_w0(std::exp(1.0)), 1.0, 1e-15);
    EXPECT_NEAR(lambert_w0(10.0), 1.7455280027406994, 1e-14);
    EXPECT_NEAR(lambert_w0(-1.0 / std::exp(1.0)), -1.0, 1e-12);
    try {
        lambert_w0(-0.4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}

TEST(LambertW, RoundTrip) {
    const double lo = -1.0 / std::exp(1.0) + 1e-6;
    for (int i = 0; i <= 200; ++i) {
        const double x = lo + (0.0 - lo) * i / 200.0;
        const double w = lambert_w0(x);
        EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(std::abs(x), 1e-300) + 1e-300) << x;
        EXPECT_GE(w, -1.0);
    }
    for (int i = 0; i <= 300; ++i) {
        const double x = std::pow(10.0, -8.0 + 14.0 * i / 300.0);
        const double w = lambert_w0(x);
        EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * x) << x;
    }
}

TEST(GapSpectrum, SingleExcitationLambda) {
    const double G11 = 0.7, G22 = 1.3;
    const double omega = 2.0 * std::hypot(G11, G22);
    HilbertSpace s({2, 2, 2});
    const auto spec = dark_gap_spectrum(G11, G22, s, 1);
    // vacuum (E = 0) plus the Lambda manifold {-Omega/2, 0, Omega/2}
    ASSERT_EQ(spec.eigenvalues.size(), 4);
    EXPECT_NEAR(spec.eigenvalues(0), -omega / 2, 1e-9 * omega);
    EXPECT_NEAR(spec.eigenvalues(1), 0.0, 1e-9 * omega);
    EXPECT_NEAR(spec.eigenvalues(2), 0.0, 1e-9 * omega);
    EXPECT_NEAR(spec.eigenvalues(3), omega / 2, 1e-9 * omega);
    EXPECT_NEAR(spec.gap, omega / 2, 1e-9 * omega);

    // dark state cos(theta)|0,1,0> - sin(theta)|0,0,1>, tan(theta) = G11/G22, lies in the zero eigenspace
    const double th = std::atan2(G11, G22);
    Vector target = Vector::Zero(spec.basis.size());
    for (std::size_t k = 0; k < spec.basis.size(); ++k) {
        if (spec.basis[k] == s.index(std::vector<int>{0, 1, 0})) target(k) = std::cos(th);
        if (spec.basis[k] == s.index(std::vector<int>{0, 0, 1})) target(k) = -std::sin(th);
    }
    const Matrix zero_space = spec.eigenvectors.middleCols(1, 2);
    EXPECT_GE((zero_space.adjoint() * target).squaredNorm(), 1.0 - 1e-9);
}

TEST(GapSpectrum, MatchesCollectiveModeLadder) {
    // H = G (a^dag b_+ + h.c.) with b_- a spectator: for N total quanta and m in b_-,
    // energies G (N - m - 2j), j = 0..N-m.
    const double G11 = 1.1, G22 = 0.4, G = std::hypot(G11, G22);
    const int cap = 3;
    HilbertSpace s({4, 4, 4});
    const auto spec = dark_gap_spectrum(G11, G22, s, cap);
    std::vector<double> expected;
    for (int N = 0; N <= cap; ++N)
        for (int m = 0; m <= N; ++m)
            for (int j = 0; j <= N - m; ++j) expected.push_back(G * (N - m - 2 * j));
    std::sort(expected.begin(), expected.end());
    ASSERT_EQ(static_cast<std::size_t>(spec.eigenvalues.size()), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(spec.eigenvalues(i), expected[i], 1e-9 * G);
    EXPECT_NEAR(spec.gap, G, 1e-9 * G);
    // symmetric about zero
    const auto n = spec.eigenvalues.size();
    for (Eigen::Index i = 0; i < n; ++i) EXPECT_NEAR(spec.eigenvalues(i), -spec.eigenvalues(n - 1 - i), 1e-9);
}

TEST(GapSpectrum, TwoExcitationsEqualCouplings) {
    const double g = 2.0;
    const auto spec = dark_gap_spectrum(g, g, HilbertSpace({3, 3, 3}), 2);
    const double omega = 2.0 * std::sqrt(2.0) * g;
    EXPECT_NEAR(spec.gap, omega / 2, 1e-9 * omega);
    EXPECT_NEAR(spec.eigenvalues.maxCoeff(), omega, 1e-9 * omega);
    EXPECT_NEAR(spec.eigenvalues.minCoeff(), -omega, 1e-9 * omega);
}

TEST(GapSpectrum, TruncationGuard) {
    try {
        dark_gap_spectrum(1.0, 1.0, HilbertSpace({2, 3, 3}), 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::truncation);
    }
}

TEST(Resonance, Examples) {
    const double w2 = TWO_PI * 1.8e6, w1 = TWO_PI * 1.2e6;
    EXPECT_EQ(resonance_check(3 * w2, w2, 1.1 * w2, w2, 1.0), Resonance::resonant_on_mode_2);
    EXPECT_EQ(resonance_check(w2, 3 * w2, 1.1 * w2, w2, 1.0), Resonance::resonant_on_mode_2);
    EXPECT_EQ(resonance_check(3 * w1, w1, 3 * w1, w1, 1.0), Resonance::resonant_on_mode_2);
    EXPECT_EQ(resonance_check(w1, 3 * w1, w1, 3 * w1, 1.0), Resonance::resonant_on_mode_1);
    EXPECT_EQ(resonance_check(w1, w2, w1, w2, TWO_PI * 1e3), Resonance::none);
    for (double d : {0.3, 1.7, 2.0, 4.4}) {
        EXPECT_EQ(resonance_check(d * w1, w2, w1, w2, 1.0), resonance_check(w2, d * w1, w1, w2, 1.0));
    }
}

TEST(WalkSlope, TrivialZeros) {
    EXPECT_EQ(walk_growth_slope(2000, 1000, G_COUPLING, TWO_PI * 1.8e6), cplx(0.0, 0.0));
    EXPECT_EQ(walk_growth_slope(2000, 0, G_COUPLING, TWO_PI * 1.8e6), cplx(0.0, 0.0));
}

TEST(WalkSlope, QuadratureOracle) {
    // K(w,t) = -int_0^t dt2 sqrt(3) A_-(t2) int_0^t2 dt1 sqrt(2) A_+(t1),
    // A_pm(t) = g2 (a1 e^{pm i D1 t} + a2 e^{pm i D2 t}) e^{i w2 t}, D1 = 3 w2, D2 = w2.
    // The oscillatory part has period 2 pi / w2, so K(2T) - K(T) = slope * T.
    const double g2 = G_COUPLING, w2 = 1.0;   // time in units of 1/w2
    for (auto [a1, a2] : {std::pair{2000.0, 500.0}, std::pair{300.0, 900.0}}) {
        auto ap = [&](double t) { return g2 * (a1 * std::exp(I_UNIT * 3.0 * w2 * t) + a2 * std::exp(I_UNIT * w2 * t)) * std::exp(I_UNIT * w2 * t); };
        auto am = [&](double t) { return g2 * (a1 * std::exp(-I_UNIT * 3.0 * w2 * t) + a2 * std::exp(-I_UNIT * w2 * t)) * std::exp(I_UNIT * w2 * t); };
        const double period = TWO_PI / w2;
        const int n = 200000;
        const double h = 2 * period / n;
        cplx inner = 0.0, outer = 0.0, k_at_t = 0.0;
        cplx prev_inner = 0.0;
        cplx f_prev = am(0.0) * inner;
        for (int i = 1; i <= n; ++i) {
            const double t0 = (i - 1) * h, t1 = i * h;
            // Simpson on each sub-interval for the inner integral
            inner = prev_inner + h / 6.0 * (ap(t0) + 4.0 * ap(0.5 * (t0 + t1)) + ap(t1));
            const cplx inner_mid = prev_inner + h / 24.0 * (5.0 * ap(t0) + 8.0 * ap(0.5 * (t0 + t1)) - ap(t1));
            const cplx f_next = am(t1) * inner;
            outer += h / 6.0 * (f_prev + 4.0 * am(0.5 * (t0 + t1)) * inner_mid + f_next);
            f_prev = f_next;
            prev_inner = inner;
            if (i == n / 2) k_at_t = outer;
        }
        const cplx k_t = -std::sqrt(6.0) * k_at_t;
        const cplx k_2t = -std::sqrt(6.0) * outer;
        const cplx slope = (k_2t - k_t) / period;
        const cplx closed = walk_growth_slope(a1, a2, g2, w2);
        EXPECT_NEAR(slope.real(), closed.real(), 1e-6 * std::abs(closed));
        EXPECT_NEAR(slope.imag(), closed.imag(), 1e-6 * std::abs(closed));
        EXPECT_NEAR(std::abs(quoted_walk_growth_slope(a1, a2, g2, w2)), 0.5 * std::abs(closed), 1e-12 * std::abs(closed));
    }
}

TEST(TransferTime, QuotedRatios) {
    const DriveSchedule sch = [] { DriveSchedule s; s.alpha0 = ALPHA0; return s; }();
    const auto cold = transfer_time_window(table_params(0.010), sch);
    const auto warm = transfer_time_window(table_params(1.0), sch);
    EXPECT_NEAR(cold.ratio, 0.004, 0.0005);
    EXPECT_NEAR(warm.ratio, 0.04, 0.005);
    EXPECT_NEAR(cold.tau_geometric, std::sqrt(cold.lower * cold.upper), 1e-15);
    const double G = G_COUPLING * ALPHA0;
    EXPECT_NEAR(cold.lower, TWO_PI * 2e3 / (G * G), 1e-18);
    EXPECT_NEAR(cold.upper, HBAR_SI * 1e9 / (KB_SI * 0.010), 1e-12);
}

TEST(TransferTime, Limits) {
    DriveSchedule sch;
    sch.alpha0 = ALPHA0;
    auto p = table_params(0.010);
    p.kappa = 0.0;
    EXPECT_EQ(transfer_time_window(p, sch).lower, 0.0);
    p = table_params(0.0);
    const auto w = transfer_time_window(p, sch);
    EXPECT_TRUE(std::isinf(w.upper));
    EXPECT_EQ(w.ratio, 0.0);
}

TEST(Damping, Values) {
    const double kappa = TWO_PI * 2e3;
    EXPECT_EQ(optomechanical_damping(0.0, kappa), 0.0);
    EXPECT_NEAR(optomechanical_damping(G_COUPLING * ALPHA0, kappa) / TWO_PI, 50e3, 1e-6);
    EXPECT_NEAR(optomechanical_damping(2 * G_COUPLING * ALPHA0, kappa),
                4 * optomechanical_damping(G_COUPLING * ALPHA0, kappa), 1e-6);
    try {
        optomechanical_damping(1.0, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::domain);
    }
}
