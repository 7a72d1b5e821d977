// model.hpp: system parameters, drive envelopes, and optomechanical Hamiltonians
//
// Units: all rates and frequencies are angular (rad/s), times in seconds,
// hbar = 1 for the dynamics.

#pragma once

#include "omstirap/hilbert.hpp"

#include <string>
#include <utility>
#include <vector>

namespace omstirap {

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;
inline constexpr double HBAR_SI = 1.054571817e-34;   // J s
inline constexpr double KB_SI = 1.380649e-23;        // J/K

struct SystemParams {
    double omega1 = 0.0, omega2 = 0.0;   // mechanical frequencies
    double omega_c = 0.0;                // cavity frequency (informational)
    double g1 = 0.0, g2 = 0.0;           // single-photon couplings
    double delta1 = 0.0, delta2 = 0.0;   // pump detunings
    double kappa = 0.0;                  // cavity decay
    double gamma1 = 0.0, gamma2 = 0.0;   // mechanical linewidths
    double temperature = 0.0;            // bath temperature (K)
    double q1 = 0.0, q2 = 0.0;           // quality factors

    // Throws invalid_argument on negative rates or temperature.
    void validate() const;
    // kappa >= omega_i: outside the resolved-sideband regime.
    bool unresolved_sideband() const noexcept;

    // Resets gamma_i = omega_i / q_i (q_i <= 0 means lossless).
    void set_quality_factors(double q1_, double q2_);
};

// Standard two-membrane parameter set: 1.2 / 1.8 MHz, Q = 1e9, kappa/2pi = 2 kHz,
// g/2pi = 2.5 Hz, resonant drives.
SystemParams table_params(double temperature_k);
// Same frequencies and couplings, all loss channels and temperature set to zero.
SystemParams lossless_params();

enum class PulseKind { stirap, fractional, reversed_fractional, constant };

struct DriveSchedule {
    PulseKind kind = PulseKind::stirap;
    double alpha0 = 0.0;
    double tau = 0.0;
    double sigma1 = 1.0, sigma2 = 1.0;
    double theta = PI / 2;
    double phase1 = 0.0, phase2 = 0.0;
    // Time origin of the sequence; envelopes are evaluated at t - center.
    double center = 0.0;

    void validate() const;
    // Support of the sequence: outside [start, end] both envelopes vanish.
    std::pair<double, double> support() const;
};

// Several schedules applied in succession (their envelopes add).
using DriveSequence = std::vector<DriveSchedule>;

PulseKind parse_pulse_kind(const std::string& name);
std::string to_string(PulseKind kind);

// Gaussians are treated as exactly zero beyond this many widths.
inline constexpr double ENVELOPE_CUTOFF_SIGMAS = 8.0;

// Real envelope alpha_i(t) of pump 1 or 2.
double envelope(const DriveSchedule& schedule, int pump_index, double t);
// Complex drive amplitude alpha_i(t) e^{i phase_i}, summed over the sequence.
cplx drive_amplitude(const DriveSequence& sequence, int pump_index, double t);

// atan2(g1 alpha1, g2 alpha2); the limiting value is returned once both vanish.
double mixing_angle(const DriveSchedule& schedule, const SystemParams& params, double t);

enum class Picture {
    rwa,            // resonant beam-splitter terms a^dag b_i only
    full,           // every product term with its rotating phase
    beam_splitter,  // all a^dag b_j cross terms, counter-rotating a^dag b_j^dag dropped
};

Picture parse_picture(const std::string& name);
std::string to_string(Picture picture);

struct HamiltonianSpec {
    SystemParams params;
    DriveSequence schedules;
    HilbertSpace space;
    Picture picture = Picture::rwa;

    void validate() const;
};

// H(t) = sum_k [c_k(t) A_k + h.c.]. The operator list depends only on the
// picture; coefficients carry envelopes and phases.
std::vector<Operator> coupling_operators(const HamiltonianSpec& spec);
std::vector<cplx> coupling_coefficients(const HamiltonianSpec& spec, double t);

Operator hamiltonian_at(const HamiltonianSpec& spec, double t);

enum class ModeConvention { rwa_phased, static_couplings };

struct CollectiveModes {
    Operator b_minus;
    Operator b_plus;
};

CollectiveModes collective_operators(const SystemParams& params, const DriveSequence& schedules,
                                     double t, ModeConvention convention, const HilbertSpace& space);

// Tridiagonal (2n+1)-state chain in the basis |0,n,0>, |1,n-1,0>, |0,n-1,1>, ...
// Entries match the resonant RWA Hamiltonian restricted to that basis.
Matrix chain_hamiltonian(int n, double G11, double G22, double phi1, double phi2);
// Basis indices (in `space`) of the chain states for excitation number n.
std::vector<Eigen::Index> chain_basis(const HilbertSpace& space, int n);

// Bose-Einstein occupancy with SI constants; omega in rad/s.
double bose_occupancy(double omega, double temperature_k);

} // namespace omstirap
