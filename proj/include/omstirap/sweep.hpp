// sweep.hpp: parallel parameter sweeps, contour extraction, degenerate-mode diagnostics

#pragma once

#include "omstirap/protocols.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace omstirap {

enum class AxisScale { linear, log };

AxisScale parse_axis_scale(const std::string& name);
std::string to_string(AxisScale scale);

// Parameter paths:
//   kappa, omega1, omega2, g1, g2, g, temperature, q, q1, q2   (system, SI / rad/s)
//   alpha0, tau, sigma, sigma1, sigma2, theta                  (every schedule)
//   delta       omega2 = omega1 + value
//   tau_ratio   tau = sigma1 / value
// Resonant drives (delta_i == omega_i) stay resonant when omega_i moves, and
// gamma_i follows omega_i / q_i when q_i > 0.
const std::vector<std::string>& sweep_parameters();
void apply_parameter(Scenario& scenario, const std::string& parameter, double value);

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
    AxisScale scale = AxisScale::linear;

    // Strictly monotone values (positive on a log axis), known parameter.
    void validate() const;
};

// Field names: n1, n2, nc (at the evaluation time), fidelity, peak_negativity.
const std::vector<std::string>& sweep_fields();

inline constexpr std::size_t REDUCED_DIMS_CELLS = 400;

struct SweepOptions {
    std::size_t workers = 1;
    // Linked rule: tau = sigma1 / tau_ratio after the axis values are set.
    std::optional<double> tau_ratio;
    // Per-cell dims capped at (2, 4, 4) once the grid has REDUCED_DIMS_CELLS cells.
    bool reduce_dims = true;
    // Horizon taken from the support of the schedules of each cell.
    bool fit_horizon = true;
    // RWA cells within this distance (rad/s) of omega1 = omega2, omega1 = 3 omega2
    // or omega2 = 3 omega1 run in nonrwa_picture instead.
    double nonrwa_window = 0.0;
    Picture nonrwa_picture = Picture::full;
};

struct SweepFailure {
    std::size_t cell = 0;
    ErrorKind kind = ErrorKind::diverged;
    std::string message;
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<std::string> field_names;
    // Row-major grids, axis 0 slowest. Failed cells hold NaN.
    std::map<std::string, std::vector<double>> fields;
    std::vector<SweepFailure> failures;
    std::vector<Picture> pictures;   // per cell
    std::vector<int> dims;

    std::vector<std::size_t> shape() const;
    std::size_t cell_count() const;
    std::vector<double> coordinates(std::size_t cell) const;
    double value(const std::string& field, std::size_t i, std::size_t j = 0) const;
};

// The scenario run for one cell (axis values, linked rules, dims, picture, horizon).
Scenario cell_scenario(const Scenario& base, const std::vector<SweepAxis>& axes, std::size_t cell,
                       const SweepOptions& options);

// Cells run independently and write to preallocated slots, so the grids do
// not depend on the worker count. Cell errors are recorded, not rethrown.
SweepResult run_sweep(const Scenario& base, const std::vector<SweepAxis>& axes, const std::vector<std::string>& fields,
                      const SweepOptions& options = {});

struct ContourLine {
    double level = 0.0;
    std::vector<std::array<double, 2>> points;
    bool closed = false;
};

// Marching squares on f[i * y.size() + j] sampled at (x[i], y[j]); cells with a
// NaN corner are skipped. Saddles are resolved by the cell-center average.
std::vector<ContourLine> marching_squares(const std::vector<double>& x, const std::vector<double>& y,
                                          const std::vector<double>& f, double level);

// Contours in axis coordinates (log axes are interpolated in log space).
std::vector<ContourLine> extract_contours(const SweepResult& result, const std::string& field,
                                          const std::vector<double>& levels);

struct SpotCheck {
    std::vector<std::size_t> cells;
    std::vector<double> reference;   // field value rerun at the check dims
    double max_relative_difference = 0.0;
};

// Reruns `count` random populated cells at `dims` and compares one field.
// Relative differences use max(|reference|, 1e-3) as the denominator.
SpotCheck convergence_spot_check(const Scenario& base, const SweepResult& result, const std::string& field,
                                 const SweepOptions& options, std::size_t count = 5, std::uint64_t seed = 1,
                                 const std::vector<int>& dims = {2, 5, 5});

struct DegenerateDiagnostics {
    std::vector<double> times;
    std::vector<double> n1, n2, n_plus, n_minus;
};

// Full-picture run of a scenario with omega1 = omega2; b_+/b_- from the static couplings.
DegenerateDiagnostics degenerate_mode_diagnostics(const Scenario& scenario);

// One row per cell: axis values then fields; failed cells print "nan".
void write_sweep_csv(std::ostream& out, const SweepResult& result);

} // namespace omstirap
