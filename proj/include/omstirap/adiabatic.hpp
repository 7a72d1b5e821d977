// adiabatic.hpp: adiabaticity window, dark-state gap, resonance and rate analytics

#pragma once

#include "omstirap/hilbert.hpp"
#include "omstirap/model.hpp"

#include <vector>

namespace omstirap {

// Omega_0 = 2 g_1 alpha_0 (peak pump amplitude alpha_0 drives a Rabi rate 2 g alpha).
double omega0_from(double g1, double alpha0);

enum class UpperBoundForm {
    tabulated,   // W0(cot^2(theta/2) Omega_0 sigma / n_o); reproduces the quoted windows
    as_written,  // W0(cos^2(theta/2) Omega_0 sigma / (n_o sin(theta/2)))
};

struct AdiabaticityOptions {
    UpperBoundForm upper_form = UpperBoundForm::tabulated;
    // Replace T_Omega ~ 2 tau + 2 sigma sqrt(ln 2) by a numerical FWHM of Omega(t).
    bool exact_omega_width = false;
};

struct AdiabaticityReport {
    double theta_dot_max = 0.0;   // 1/s
    double omega_at_zero = 0.0;   // rad/s
    double t_theta_width = 0.0;   // s
    double t_omega_width = 0.0;   // s
    double lower_bound = 0.0;     // on 2 tau / sigma
    double upper_bound = 0.0;     // on 2 tau / sigma
    bool satisfied = false;

    // The same window expressed for tau / sigma.
    double tau_over_sigma_lower() const noexcept { return 0.5 * lower_bound; }
    double tau_over_sigma_upper() const noexcept { return 0.5 * upper_bound; }
};

AdiabaticityReport adiabaticity_bounds(double theta, double sigma, double tau, double omega0, double n_o,
                                       const AdiabaticityOptions& options = {});

// Principal branch of the Lambert W function, x >= -1/e.
double lambert_w0(double x);

struct GapSpectrum {
    Eigen::VectorXd eigenvalues;          // ascending
    double gap = 0.0;                     // smallest nonzero |E|
    std::vector<Eigen::Index> basis;      // indices into the full space, excitation <= cap
    Matrix eigenvectors;                  // columns match eigenvalues, rows match basis
};

// Resonant RWA Hamiltonian G11 (a^dag b1 + h.c.) + G22 (a^dag b2 + h.c.) on the
// states with n_c + n_1 + n_2 <= excitation_cap. Every mode must hold cap quanta.
GapSpectrum dark_gap_spectrum(double G11, double G22, const HilbertSpace& space, int excitation_cap);

enum class Resonance { none, resonant_on_mode_1, resonant_on_mode_2 };

// Flags | |Delta1 - Delta2| - 2 omega_j | <= tolerance, mode 1 checked first.
Resonance resonance_check(double delta1, double delta2, double omega1, double omega2, double tolerance);

// Linear-in-t coefficient of K(w, t) for the walk |0,0,1> -> |1,0,2> -> |0,0,3>
// at Delta1 = 3 Delta2 = 3 omega2, with constant amplitudes alpha1, alpha2:
// i sqrt(3/8) (alpha1 - 2 alpha2) alpha2 g2^2 / omega2.
cplx walk_growth_slope(double alpha1, double alpha2, double g2, double omega2);
// The closed form as usually quoted, with 2 omega2 in the denominator.
cplx quoted_walk_growth_slope(double alpha1, double alpha2, double g2, double omega2);

struct TransferTimeWindow {
    double lower = 0.0;           // kappa / max G_i^2
    double upper = 0.0;           // hbar Q / (k_B T); +inf at T = 0
    double tau_geometric = 0.0;   // sqrt(lower * upper)
    double ratio = 0.0;           // sqrt(lower / upper) = tau_geometric / upper
};

// G_i = g_i alpha_0; Q is the smaller of the two mechanical quality factors.
TransferTimeWindow transfer_time_window(const SystemParams& params, const DriveSchedule& schedule);

// Gamma_om = 4 G0^2 / kappa.
double optomechanical_damping(double G0, double kappa);

} // namespace omstirap
