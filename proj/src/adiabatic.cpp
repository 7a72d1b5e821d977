#include "omstirap/adiabatic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace omstirap {

double omega0_from(double g1, double alpha0) { return 2.0 * g1 * alpha0; }

namespace {

// Omega(t) / Omega_0 for equal widths, following the fractional envelopes.
double omega_shape(double theta, double sigma, double tau, double t) {
    DriveSchedule s;
    s.kind = PulseKind::fractional;
    s.alpha0 = 1.0;
    s.tau = tau;
    s.sigma1 = s.sigma2 = sigma;
    s.theta = theta;
    return std::hypot(envelope(s, 1, t), envelope(s, 2, t));
}

double numerical_fwhm(double theta, double sigma, double tau) {
    const double span = tau + 6.0 * sigma;
    const int n = 8001;
    std::vector<double> ts(n), vs(n);
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        ts[i] = -span + 2.0 * span * i / (n - 1);
        vs[i] = omega_shape(theta, sigma, tau, ts[i]);
        vmax = std::max(vmax, vs[i]);
    }
    const double half = 0.5 * vmax;
    int first = 0, last = n - 1;
    while (vs[first] < half) ++first;
    while (vs[last] < half) --last;
    auto bisect = [&](double a, double b) {
        // f(a) < half <= f(b) or the reverse
        const bool rising = omega_shape(theta, sigma, tau, a) < half;
        for (int k = 0; k < 200 && b - a > 1e-15 * span; ++k) {
            const double m = 0.5 * (a + b);
            const bool below = omega_shape(theta, sigma, tau, m) < half;
            if (below == rising) a = m; else b = m;
        }
        return 0.5 * (a + b);
    };
    const double left = bisect(ts[first - 1], ts[first]);
    const double right = bisect(ts[last], ts[last + 1]);
    return right - left;
}

} // namespace

AdiabaticityReport adiabaticity_bounds(double theta, double sigma, double tau, double omega0, double n_o,
                                       const AdiabaticityOptions& options) {
    if (theta == 0.0) throw Error(ErrorKind::domain, "adiabaticity_bounds: theta = 0 is a trivial protocol");
    if (!(theta > 0.0 && theta <= PI / 2 + 1e-15)) throw Error(ErrorKind::out_of_range, "adiabaticity_bounds: theta outside (0, pi/2]");
    if (!(sigma > 0.0 && tau > 0.0 && omega0 > 0.0 && n_o > 0.0)) {
        throw Error(ErrorKind::invalid_argument, "adiabaticity_bounds: inputs must be positive");
    }
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const double ln2 = std::log(2.0);

    AdiabaticityReport r;
    r.theta_dot_max = 2.0 * tau / (sigma * sigma) * std::tan(theta / 2);
    r.omega_at_zero = 2.0 * omega0 * std::exp(-tau * tau / (sigma * sigma)) * c;
    r.t_theta_width = sigma * sigma / tau * std::asinh(c);
    r.t_omega_width = options.exact_omega_width ? numerical_fwhm(theta, sigma, tau)
                                                : 2.0 * tau + 2.0 * sigma * std::sqrt(ln2);

    r.lower_bound = std::sqrt(ln2 + 2.0 * std::asinh(c)) - std::sqrt(ln2);
    const double arg = options.upper_form == UpperBoundForm::tabulated ? (c * c) / (s * s) * omega0 * sigma / n_o
                                                                       : (c * c) / (n_o * s) * omega0 * sigma;
    r.upper_bound = std::sqrt(2.0 * lambert_w0(arg));
    const double x = 2.0 * tau / sigma;
    r.satisfied = r.lower_bound <= x && x <= r.upper_bound;
    return r;
}

double lambert_w0(double x) {
    const double branch = -1.0 / std::exp(1.0);
    if (std::isnan(x) || x < branch) throw Error(ErrorKind::domain, "lambert_w0: argument below -1/e");
    if (x == 0.0) return 0.0;
    if (x == branch) return -1.0;
    if (std::isinf(x)) return x;

    double w;
    if (x < -0.25) {
        const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < 3.0) {
        w = std::log1p(x);
    } else {
        const double l1 = std::log(x), l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

GapSpectrum dark_gap_spectrum(double G11, double G22, const HilbertSpace& space, int excitation_cap) {
    if (space.mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "dark_gap_spectrum: need 3 modes");
    if (excitation_cap < 0) throw Error(ErrorKind::invalid_argument, "dark_gap_spectrum: negative cap");
    for (std::size_t m = 0; m < 3; ++m) {
        if (space.dim(m) - 1 < excitation_cap) {
            throw Error(ErrorKind::truncation, "dark_gap_spectrum: excitation cap reaches the truncation edge");
        }
    }
    GapSpectrum out;
    for (Eigen::Index i = 0; i < space.total_dim(); ++i) {
        const auto occ = space.multi_index(i);
        if (occ[0] + occ[1] + occ[2] <= excitation_cap) out.basis.push_back(i);
    }
    const Matrix a = annihilation(space, cavity).matrix();
    const Matrix h_full = G11 * a.adjoint() * annihilation(space, mech1).matrix() +
                          G22 * a.adjoint() * annihilation(space, mech2).matrix();
    const Matrix h_sym = h_full + h_full.adjoint();
    const auto n = static_cast<Eigen::Index>(out.basis.size());
    Matrix h(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) h(i, j) = h_sym(out.basis[i], out.basis[j]);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    const double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), std::hypot(G11, G22));
    out.gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double e = std::abs(out.eigenvalues(i));
        if (e > 1e-9 * scale) out.gap = std::min(out.gap, e);
    }
    if (!std::isfinite(out.gap)) out.gap = 0.0;
    return out;
}

Resonance resonance_check(double delta1, double delta2, double omega1, double omega2, double tolerance) {
    const double d = std::abs(delta1 - delta2);
    if (std::abs(d - 2.0 * omega1) <= tolerance) return Resonance::resonant_on_mode_1;
    if (std::abs(d - 2.0 * omega2) <= tolerance) return Resonance::resonant_on_mode_2;
    return Resonance::none;
}

cplx walk_growth_slope(double alpha1, double alpha2, double g2, double omega2) {
    if (!(omega2 > 0.0)) throw Error(ErrorKind::invalid_argument, "walk_growth_slope: omega2 must be positive");
    return I_UNIT * std::sqrt(3.0 / 8.0) * (alpha1 - 2.0 * alpha2) * alpha2 * g2 * g2 / omega2;
}

cplx quoted_walk_growth_slope(double alpha1, double alpha2, double g2, double omega2) {
    return 0.5 * walk_growth_slope(alpha1, alpha2, g2, omega2);
}

TransferTimeWindow transfer_time_window(const SystemParams& params, const DriveSchedule& schedule) {
    const double g = std::max(std::abs(params.g1), std::abs(params.g2)) * schedule.alpha0;
    if (!(g > 0.0)) throw Error(ErrorKind::invalid_argument, "transfer_time_window: coupling must be positive");
    const double q = std::min(params.q1, params.q2);
    if (!(q > 0.0)) throw Error(ErrorKind::invalid_argument, "transfer_time_window: quality factors must be positive");
    if (params.kappa < 0.0 || params.temperature < 0.0) {
        throw Error(ErrorKind::invalid_argument, "transfer_time_window: negative kappa or temperature");
    }
    TransferTimeWindow w;
    w.lower = params.kappa / (g * g);
    if (params.temperature == 0.0) {
        w.upper = std::numeric_limits<double>::infinity();
        w.tau_geometric = w.lower == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        w.ratio = 0.0;
        return w;
    }
    w.upper = HBAR_SI * q / (KB_SI * params.temperature);
    w.tau_geometric = std::sqrt(w.lower * w.upper);
    w.ratio = std::sqrt(w.lower / w.upper);
    return w;
}

double optomechanical_damping(double G0, double kappa) {
    if (!(kappa > 0.0)) throw Error(ErrorKind::domain, "optomechanical_damping: kappa must be positive");
    return 4.0 * G0 * G0 / kappa;
}

} // namespace omstirap
