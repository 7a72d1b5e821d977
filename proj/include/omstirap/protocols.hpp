// protocols.hpp: scenarios, initial states, interferometric verification, experiment planner

#pragma once

#include "omstirap/analysis.hpp"
#include "omstirap/dynamics.hpp"
#include "omstirap/hilbert.hpp"
#include "omstirap/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace omstirap {

enum class InitialKind {
    fock,              // |n> in mode 1
    superposition_01,  // (|0> + |1>)/sqrt(2) in mode 1
    coherent,          // |alpha> in mode 1
    thermal,           // thermal nbar in mode 1
    thermal_product,   // thermal nbar in both mechanical modes
    heralded,          // heralded_initial_state of a thermal blue-pulse state in mode 1
    weights,           // diagonal populations of mode 1
    explicit_matrix,   // full density matrix over the scenario space
};

InitialKind parse_initial_kind(const std::string& name);
std::string to_string(InitialKind kind);

struct InitialStateSpec {
    InitialKind kind = InitialKind::fock;
    int n = 1;
    cplx alpha = 0.0;
    double nbar = 0.0;
    std::vector<double> weights;
    // heralded: rho_blue is thermal with this occupation
    double blue_nbar = 0.0;
    double signal_rate = 0.0;   // Hz
    double dcr = 0.0;           // Hz
    std::optional<Matrix> matrix;
};

// Cavity and mode 2 in vacuum unless the kind says otherwise.
DensityMatrix prepare_initial_state(const InitialStateSpec& spec, const HilbertSpace& space);

// (0.89, 0.10, 0.01) on |1>, |2>, |3>.
std::vector<double> table_initial_weights();

// Targets on the two-mechanical-mode space (d1, d2).
DensityMatrix target_mode2_copy(const std::vector<double>& weights, const HilbertSpace& mech_space);
DensityMatrix target_minus_superposition(const HilbertSpace& mech_space);   // |0>_1 (|0> - |1>)_2 / sqrt 2
DensityMatrix target_bell_minus(const HilbertSpace& mech_space);            // (|0,1> - |1,0>)/sqrt 2
DensityMatrix target_fock(const HilbertSpace& mech_space, int n1, int n2);

enum class Metric { n1, n2, nc, negativity, fidelity, n_plus, n_minus };

Metric parse_metric(const std::string& name);
std::string to_string(Metric metric);

struct Scenario {
    SystemParams params;
    DriveSequence schedules;
    InitialStateSpec initial;
    std::vector<int> dims{2, 5, 5};
    Picture picture = Picture::rwa;
    double t_start = 0.0, t_end = 0.0;
    std::size_t sample_count = 201;
    std::vector<Metric> metrics{Metric::n1, Metric::n2, Metric::nc, Metric::negativity, Metric::fidelity};
    // Fidelity target for the mechanical state rho_12.
    std::optional<DensityMatrix> target;
    // Fidelity is reported here (defaults to t_end).
    std::optional<double> evaluation_time;
    double rel_tol = 1e-8, abs_tol = 1e-10;
    double max_step = 0.0;

    void validate() const;
    HilbertSpace space() const { return HilbertSpace(dims); }
    std::vector<double> sample_times() const;
};

struct ScenarioSummary {
    double evaluation_time = 0.0;
    double final_fidelity = 0.0;     // NaN without a target
    double peak_negativity = 0.0;
    double peak_negativity_time = 0.0;
    double final_n1 = 0.0, final_n2 = 0.0, final_nc = 0.0;
    double wall_seconds = 0.0;
    std::size_t accepted_steps = 0, rejected_steps = 0;
};

struct ScenarioResult {
    Trajectory trajectory;   // states are not kept; observables hold every metric plus alpha1, alpha2
    ScenarioSummary summary;
    DensityMatrix evaluation_state;   // full state at the evaluation time
    DensityMatrix final_state;
};

// Evolves from the initial state at t_start; any IntegrationError propagates.
ScenarioResult run_scenario(const Scenario& scenario);

// sum_n c_n |0,n,0> -> sum_n c_n |Phi_n(theta)>, |Phi_n> = (cos(theta) b1^dag - sin(theta) b2^dag)^n |0> / sqrt(n!).
StateVector analytic_final_state(const StateVector& initial, double theta);

// (dcr rho_blue + signal conf(rho_blue)) / (dcr + signal), where conf moves each
// population n -> n + 1 (a heralded Stokes click adds one phonon). The output
// has one more level than rho_blue so that the trace is kept.
DensityMatrix heralded_initial_state(const DensityMatrix& rho_blue, double signal_rate, double dcr);

struct FringePoint {
    double phi2 = 0.0;
    double n1 = 0.0;    // <n_1> at the end
    double p1 = 0.0;    // P(n_1 = 1) at the end
};

struct FringeFit {
    double amplitude = 0.0;    // A in A (1 + V cos(phi1 - phi2))
    double visibility = 0.0;
    double phase = 0.0;        // fitted phi1
};

// Least squares on (1, cos phi2, sin phi2).
FringeFit fit_fringe(const std::vector<double>& phi2, const std::vector<double>& y);

struct InterferometryOptions {
    // Start from the initial state at the midpoint between the two sequences
    // (a state assumed to exist after the forward fSTIRAP).
    bool inject_after_forward = false;
    std::size_t workers = 1;
};

struct InterferometryResult {
    std::vector<FringePoint> points;   // in grid order
    FringeFit fit_n1, fit_p1;
};

// base.schedules[0] is the forward fractional sequence. Its pump-2 phase is set
// to phi1; a reversed_fractional copy centered `wait` later carries phi2.
InterferometryResult run_interferometry(const Scenario& base, const std::vector<double>& phi2_grid, double phi1,
                                        double wait, const InterferometryOptions& options = {});

struct PlannerInputs {
    double g = 0.0;           // cooling coupling G, rad/s
    double kappa = 0.0;       // rad/s
    double delta = 0.0;       // detuning, rad/s
    double omega_m = 0.0;     // rad/s
    double gamma_m = 0.0;     // rad/s
    double n_th = 0.0;
    double cool_duration = 0.0, blue_duration = 0.0;   // s
    double read_g = 0.0;      // readout coupling, rad/s
    double read_duration = 0.0;   // s
    double eta_d = 1.0, eta_r = 1.0;
    double dcr = 0.0;         // Hz
    double stokes_probability = 0.0;
    double rho00 = 0.0;       // vacuum weight of the state being read out

    void validate() const;
};

// The heralding, cooling, and readout settings of the single-membrane plan.
PlannerInputs reference_planner_inputs();

// eta_d eta_r exp(-((kappa + Gamma_m)/2 + Gamma_m n_th) wait)
double visibility_model(const PlannerInputs& inputs, double wait);

struct CoolingResult {
    double gamma_opt = 0.0;
    double n_min = 0.0;
    double n_final = 0.0;
};
CoolingResult cooling_steady_state(const PlannerInputs& inputs);

struct DetectionBudget {
    double herald_time = 0.0;     // T_h
    double final_probability = 0.0;   // P_f
    double readout_time = 0.0;    // T_r
    double readout_success = 0.0;
};
DetectionBudget detection_budget(const PlannerInputs& inputs);

} // namespace omstirap
