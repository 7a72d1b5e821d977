#include "omstirap/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omstirap {

// --------------------------- SystemParams -----------------------------------

void SystemParams::validate() const {
    const double rates[] = {omega1, omega2, g1, g2, kappa, gamma1, gamma2, delta1, delta2};
    for (double r : rates) {
        if (!std::isfinite(r) || r < 0.0) {
            throw Error(ErrorKind::invalid_argument, "SystemParams: rates and frequencies must be finite and >= 0");
        }
    }
    if (omega1 <= 0.0 || omega2 <= 0.0) {
        throw Error(ErrorKind::invalid_argument, "SystemParams: mechanical frequencies must be > 0");
    }
    if (!(temperature >= 0.0)) throw Error(ErrorKind::invalid_argument, "SystemParams: temperature must be >= 0");
}

bool SystemParams::unresolved_sideband() const noexcept { return kappa >= omega1 || kappa >= omega2; }

void SystemParams::set_quality_factors(double q1_, double q2_) {
    q1 = q1_;
    q2 = q2_;
    gamma1 = q1 > 0.0 ? omega1 / q1 : 0.0;
    gamma2 = q2 > 0.0 ? omega2 / q2 : 0.0;
}

SystemParams table_params(double temperature_k) {
    SystemParams p;
    p.omega1 = TWO_PI * 1.2e6;
    p.omega2 = TWO_PI * 1.8e6;
    p.omega_c = TWO_PI * 540e12;
    p.g1 = p.g2 = TWO_PI * 2.5;
    p.delta1 = p.omega1;
    p.delta2 = p.omega2;
    p.kappa = TWO_PI * 2e3;
    p.temperature = temperature_k;
    p.set_quality_factors(1e9, 1e9);
    return p;
}

SystemParams lossless_params() {
    SystemParams p = table_params(0.0);
    p.kappa = 0.0;
    p.set_quality_factors(0.0, 0.0);
    return p;
}

// --------------------------- Drive schedules --------------------------------

void DriveSchedule::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw Error(ErrorKind::invalid_argument, "DriveSchedule: sigma must be > 0");
    if (!(alpha0 >= 0.0)) throw Error(ErrorKind::invalid_argument, "DriveSchedule: alpha0 must be >= 0");
    if (!(theta >= 0.0 && theta <= PI / 2 + 1e-15)) {
        throw Error(ErrorKind::invalid_argument, "DriveSchedule: theta must lie in [0, pi/2]");
    }
    if (!std::isfinite(tau) || !std::isfinite(center) || !std::isfinite(phase1) || !std::isfinite(phase2)) {
        throw Error(ErrorKind::invalid_argument, "DriveSchedule: non-finite field");
    }
}

std::pair<double, double> DriveSchedule::support() const {
    if (kind == PulseKind::constant) {
        const double inf = std::numeric_limits<double>::infinity();
        return {-inf, inf};
    }
    const double half = std::abs(tau) + ENVELOPE_CUTOFF_SIGMAS * std::max(sigma1, sigma2);
    return {center - half, center + half};
}

PulseKind parse_pulse_kind(const std::string& name) {
    if (name == "stirap") return PulseKind::stirap;
    if (name == "fractional") return PulseKind::fractional;
    if (name == "reversed_fractional") return PulseKind::reversed_fractional;
    if (name == "constant") return PulseKind::constant;
    throw Error(ErrorKind::config, "unknown pulse kind '" + name + "'");
}

std::string to_string(PulseKind kind) {
    switch (kind) {
    case PulseKind::stirap: return "stirap";
    case PulseKind::fractional: return "fractional";
    case PulseKind::reversed_fractional: return "reversed_fractional";
    case PulseKind::constant: return "constant";
    }
    return "stirap";
}

namespace {

double gauss(double t, double mu, double sigma) {
    const double x = (t - mu) / sigma;
    if (std::abs(x) > ENVELOPE_CUTOFF_SIGMAS) return 0.0;
    return std::exp(-x * x);
}

double fractional_envelope(const DriveSchedule& s, int pump, double u) {
    if (pump == 1) return s.alpha0 * std::sin(s.theta) * gauss(u, s.tau, s.sigma1);
    return s.alpha0 * (gauss(u, -s.tau, s.sigma2) + std::cos(s.theta) * gauss(u, s.tau, s.sigma2));
}

void check_pump(int pump_index) {
    if (pump_index != 1 && pump_index != 2) throw Error(ErrorKind::invalid_argument, "pump index must be 1 or 2");
}

} // namespace

double envelope(const DriveSchedule& s, int pump_index, double t) {
    check_pump(pump_index);
    const double u = t - s.center;
    switch (s.kind) {
    case PulseKind::stirap:
        return pump_index == 1 ? s.alpha0 * gauss(u, s.tau, s.sigma1) : s.alpha0 * gauss(u, -s.tau, s.sigma2);
    case PulseKind::fractional:
        return fractional_envelope(s, pump_index, u);
    case PulseKind::reversed_fractional:
        return fractional_envelope(s, pump_index, -u);
    case PulseKind::constant:
        return s.alpha0;
    }
    return 0.0;
}

cplx drive_amplitude(const DriveSequence& sequence, int pump_index, double t) {
    cplx sum = 0.0;
    for (const auto& s : sequence) {
        const double a = envelope(s, pump_index, t);
        if (a != 0.0) sum += a * std::polar(1.0, pump_index == 1 ? s.phase1 : s.phase2);
    }
    return sum;
}

double mixing_angle(const DriveSchedule& s, const SystemParams& params, double t) {
    const double x = params.g1 * envelope(s, 1, t);
    const double y = params.g2 * envelope(s, 2, t);
    if (x != 0.0 || y != 0.0) return std::atan2(x, y);
    const bool before = t < s.center;
    switch (s.kind) {
    case PulseKind::stirap: return before ? 0.0 : PI / 2;
    case PulseKind::fractional: return before ? 0.0 : s.theta;
    case PulseKind::reversed_fractional: return before ? s.theta : 0.0;
    case PulseKind::constant: return 0.0;
    }
    return 0.0;
}

Picture parse_picture(const std::string& name) {
    if (name == "rwa") return Picture::rwa;
    if (name == "full") return Picture::full;
    if (name == "beam_splitter") return Picture::beam_splitter;
    throw Error(ErrorKind::config, "unknown picture '" + name + "'");
}

std::string to_string(Picture picture) {
    switch (picture) {
    case Picture::rwa: return "rwa";
    case Picture::full: return "full";
    case Picture::beam_splitter: return "beam_splitter";
    }
    return "rwa";
}

// --------------------------- Hamiltonian ------------------------------------

void HamiltonianSpec::validate() const {
    if (space.mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "HamiltonianSpec: space must have 3 modes");
    params.validate();
    for (const auto& s : schedules) s.validate();
}

std::vector<Operator> coupling_operators(const HamiltonianSpec& spec) {
    spec.validate();
    const Operator a_dag = annihilation(spec.space, cavity).adjoint();
    const Operator b1 = annihilation(spec.space, mech1);
    const Operator b2 = annihilation(spec.space, mech2);
    std::vector<Operator> ops{a_dag * b1, a_dag * b2};
    if (spec.picture == Picture::full) {
        ops.push_back(a_dag * b1.adjoint());
        ops.push_back(a_dag * b2.adjoint());
    }
    return ops;
}

std::vector<cplx> coupling_coefficients(const HamiltonianSpec& spec, double t) {
    const SystemParams& p = spec.params;
    const cplx c[2] = {drive_amplitude(spec.schedules, 1, t), drive_amplitude(spec.schedules, 2, t)};
    const double g[2] = {p.g1, p.g2};
    const double delta[2] = {p.delta1, p.delta2};
    const double omega[2] = {p.omega1, p.omega2};

    std::vector<cplx> out;
    switch (spec.picture) {
    case Picture::rwa:
        for (int j = 0; j < 2; ++j) out.push_back(g[j] * c[j] * std::polar(1.0, (delta[j] - omega[j]) * t));
        break;
    case Picture::beam_splitter:
    case Picture::full:
        for (int j = 0; j < 2; ++j) {
            cplx s = 0.0;
            for (int i = 0; i < 2; ++i) s += c[i] * std::polar(1.0, (delta[i] - omega[j]) * t);
            out.push_back(g[j] * s);
        }
        if (spec.picture == Picture::full) {
            for (int j = 0; j < 2; ++j) {
                cplx s = 0.0;
                for (int i = 0; i < 2; ++i) s += c[i] * std::polar(1.0, (delta[i] + omega[j]) * t);
                out.push_back(g[j] * s);
            }
        }
        break;
    }
    return out;
}

Operator hamiltonian_at(const HamiltonianSpec& spec, double t) {
    const auto ops = coupling_operators(spec);
    const auto coef = coupling_coefficients(spec, t);
    Matrix h = Matrix::Zero(spec.space.total_dim(), spec.space.total_dim());
    for (std::size_t k = 0; k < ops.size(); ++k) h += coef[k] * ops[k].matrix();
    Matrix herm = h + h.adjoint();
    return Operator(spec.space, std::move(herm));
}

CollectiveModes collective_operators(const SystemParams& params, const DriveSequence& schedules,
                                     double t, ModeConvention convention, const HilbertSpace& space) {
    if (space.mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "collective_operators: need 3 modes");
    const Operator b1 = annihilation(space, mech1);
    const Operator b2 = annihilation(space, mech2);

    if (convention == ModeConvention::static_couplings) {
        const double n = std::hypot(params.g1, params.g2);
        if (n == 0.0) throw Error(ErrorKind::undefined_mode, "collective_operators: both couplings are zero");
        return {(cplx(params.g2 / n) * b1) - (cplx(params.g1 / n) * b2),
                (cplx(params.g1 / n) * b1) + (cplx(params.g2 / n) * b2)};
    }

    const double g[2] = {params.g1, params.g2};
    const double detuning_phase[2] = {(params.delta1 - params.omega1) * t, (params.delta2 - params.omega2) * t};
    cplx c[2];
    double arg[2];
    for (int i = 0; i < 2; ++i) {
        c[i] = g[i] * drive_amplitude(schedules, i + 1, t) * std::polar(1.0, detuning_phase[i]);
        if (std::abs(c[i]) > 0.0) {
            arg[i] = std::arg(c[i]);
        } else {
            const double drive = schedules.empty() ? 0.0 : (i == 0 ? schedules[0].phase1 : schedules[0].phase2);
            arg[i] = detuning_phase[i] + drive;
        }
    }
    const double G11 = std::abs(c[0]), G22 = std::abs(c[1]);
    const double n = std::hypot(G11, G22);
    if (n == 0.0) throw Error(ErrorKind::undefined_mode, "collective_operators: both couplings vanish at t");
    const Operator bm = (std::polar(G22 / n, arg[0]) * b1) - (std::polar(G11 / n, arg[1]) * b2);
    const Operator bp = (std::polar(G11 / n, arg[0]) * b1) + (std::polar(G22 / n, arg[1]) * b2);
    return {bm, bp};
}

Matrix chain_hamiltonian(int n, double G11, double G22, double phi1, double phi2) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "chain_hamiltonian: n must be >= 1");
    const int size = 2 * n + 1;
    Matrix h = Matrix::Zero(size, size);
    for (int k = 1; k <= n; ++k) {
        const cplx odd = std::sqrt(static_cast<double>(n - k + 1)) * G11 * std::polar(1.0, -phi1);
        const cplx even = std::sqrt(static_cast<double>(k)) * G22 * std::polar(1.0, phi2);
        h(2 * k - 2, 2 * k - 1) = odd;
        h(2 * k - 1, 2 * k - 2) = std::conj(odd);
        h(2 * k - 1, 2 * k) = even;
        h(2 * k, 2 * k - 1) = std::conj(even);
    }
    return h;
}

std::vector<Eigen::Index> chain_basis(const HilbertSpace& space, int n) {
    if (n < 1) throw Error(ErrorKind::invalid_argument, "chain_basis: n must be >= 1");
    std::vector<Eigen::Index> idx;
    for (int k = 1; k <= n; ++k) {
        idx.push_back(space.index(std::vector<int>{0, n - k + 1, k - 1}));
        idx.push_back(space.index(std::vector<int>{1, n - k, k - 1}));
    }
    idx.push_back(space.index(std::vector<int>{0, 0, n}));
    return idx;
}

double bose_occupancy(double omega, double temperature_k) {
    if (!(omega > 0.0)) throw Error(ErrorKind::invalid_argument, "bose_occupancy: omega must be > 0");
    if (!(temperature_k >= 0.0)) throw Error(ErrorKind::invalid_argument, "bose_occupancy: temperature must be >= 0");
    if (temperature_k == 0.0) return 0.0;
    return 1.0 / std::expm1(HBAR_SI * omega / (KB_SI * temperature_k));
}

} // namespace omstirap
