#include "omstirap/sweep.hpp"

#include "omstirap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

namespace omstirap {

namespace {

constexpr double NaN = std::numeric_limits<double>::quiet_NaN();

void set_omega(SystemParams& p, int mode, double value) {
    double& omega = mode == 1 ? p.omega1 : p.omega2;
    double& delta = mode == 1 ? p.delta1 : p.delta2;
    const bool resonant = delta == omega;
    omega = value;
    if (resonant) delta = value;
    p.set_quality_factors(p.q1, p.q2);
}

bool deferred(const std::string& parameter) { return parameter == "delta" || parameter == "tau_ratio"; }

// Moves the fidelity target onto the mechanical dims of the scenario: levels
// beyond the new cutoff are dropped, new levels are empty, and the trace is
// renormalized.
void fit_target(Scenario& sc) {
    if (!sc.target || sc.dims.size() != 3) return;
    const HilbertSpace& old = sc.target->space();
    if (old.mode_count() == 2 && old.dim(0) == sc.dims[1] && old.dim(1) == sc.dims[2]) return;
    const HilbertSpace mech({sc.dims[1], sc.dims[2]});
    Matrix m = Matrix::Zero(mech.total_dim(), mech.total_dim());
    for (Eigen::Index a = 0; a < mech.total_dim(); ++a) {
        const auto ia = mech.multi_index(a);
        if (ia[0] >= old.dim(0) || ia[1] >= old.dim(1)) continue;
        for (Eigen::Index b = 0; b < mech.total_dim(); ++b) {
            const auto ib = mech.multi_index(b);
            if (ib[0] >= old.dim(0) || ib[1] >= old.dim(1)) continue;
            m(a, b) = sc.target->matrix()(old.index(ia), old.index(ib));
        }
    }
    const double tr = m.trace().real();
    if (!(tr > 0.0)) throw Error(ErrorKind::truncation, "sweep: target has no weight inside the cell dims");
    sc.target = DensityMatrix(mech, m / tr);
}

} // namespace

AxisScale parse_axis_scale(const std::string& name) {
    if (name == "linear") return AxisScale::linear;
    if (name == "log") return AxisScale::log;
    throw Error(ErrorKind::config, "unknown axis scale '" + name + "'");
}

std::string to_string(AxisScale scale) { return scale == AxisScale::log ? "log" : "linear"; }

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"kappa", "omega1", "omega2", "g1", "g2", "g", "temperature", "q", "q1",
                                                "q2", "alpha0", "tau", "sigma", "sigma1", "sigma2", "theta", "delta",
                                                "tau_ratio"};
    return names;
}

void apply_parameter(Scenario& sc, const std::string& parameter, double value) {
    SystemParams& p = sc.params;
    auto each = [&](auto&& fn) {
        for (auto& s : sc.schedules) fn(s);
    };
    if (parameter == "kappa") p.kappa = value;
    else if (parameter == "omega1") set_omega(p, 1, value);
    else if (parameter == "omega2") set_omega(p, 2, value);
    else if (parameter == "delta") set_omega(p, 2, p.omega1 + value);
    else if (parameter == "g1") p.g1 = value;
    else if (parameter == "g2") p.g2 = value;
    else if (parameter == "g") p.g1 = p.g2 = value;
    else if (parameter == "temperature") p.temperature = value;
    else if (parameter == "q") p.set_quality_factors(value, value);
    else if (parameter == "q1") p.set_quality_factors(value, p.q2);
    else if (parameter == "q2") p.set_quality_factors(p.q1, value);
    else if (parameter == "alpha0") each([&](DriveSchedule& s) { s.alpha0 = value; });
    else if (parameter == "tau") each([&](DriveSchedule& s) { s.tau = value; });
    else if (parameter == "sigma") each([&](DriveSchedule& s) { s.sigma1 = s.sigma2 = value; });
    else if (parameter == "sigma1") each([&](DriveSchedule& s) { s.sigma1 = value; });
    else if (parameter == "sigma2") each([&](DriveSchedule& s) { s.sigma2 = value; });
    else if (parameter == "theta") each([&](DriveSchedule& s) { s.theta = value; });
    else if (parameter == "tau_ratio") {
        if (!(value > 0.0)) throw Error(ErrorKind::config, "tau_ratio must be positive");
        each([&](DriveSchedule& s) { s.tau = s.sigma1 / value; });
    } else {
        throw Error(ErrorKind::config, "unknown sweep parameter '" + parameter + "'");
    }
}

void SweepAxis::validate() const {
    const auto& known = sweep_parameters();
    if (std::find(known.begin(), known.end(), parameter) == known.end()) {
        throw Error(ErrorKind::config, "unknown sweep parameter '" + parameter + "'");
    }
    if (values.empty()) throw Error(ErrorKind::config, "sweep axis '" + parameter + "' has no values");
    const bool up = values.size() < 2 || values[1] > values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw Error(ErrorKind::config, "sweep axis '" + parameter + "' has a non-finite value");
        if (scale == AxisScale::log && !(values[i] > 0.0)) {
            throw Error(ErrorKind::config, "log axis '" + parameter + "' needs positive values");
        }
        if (i > 0 && (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))) {
            throw Error(ErrorKind::config, "sweep axis '" + parameter + "' is not strictly monotone");
        }
    }
}

const std::vector<std::string>& sweep_fields() {
    static const std::vector<std::string> names{"n1", "n2", "nc", "fidelity", "peak_negativity"};
    return names;
}

std::vector<std::size_t> SweepResult::shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes) s.push_back(a.values.size());
    return s;
}

std::size_t SweepResult::cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

std::vector<double> SweepResult::coordinates(std::size_t cell) const {
    if (axes.size() == 1) return {axes[0].values.at(cell)};
    const std::size_t ny = axes[1].values.size();
    return {axes[0].values.at(cell / ny), axes[1].values.at(cell % ny)};
}

double SweepResult::value(const std::string& field, std::size_t i, std::size_t j) const {
    const auto& grid = fields.at(field);
    return axes.size() == 1 ? grid.at(i) : grid.at(i * axes[1].values.size() + j);
}

Scenario cell_scenario(const Scenario& base, const std::vector<SweepAxis>& axes, std::size_t cell,
                       const SweepOptions& options) {
    if (axes.empty() || axes.size() > 2) throw Error(ErrorKind::config, "sweep needs one or two axes");
    std::vector<std::size_t> idx(axes.size());
    std::size_t cells = 1;
    for (const auto& a : axes) cells *= a.values.size();
    if (cell >= cells) throw Error(ErrorKind::out_of_range, "sweep cell index out of range");
    if (axes.size() == 1) {
        idx[0] = cell;
    } else {
        idx[0] = cell / axes[1].values.size();
        idx[1] = cell % axes[1].values.size();
    }

    Scenario sc = base;
    for (std::size_t k = 0; k < axes.size(); ++k)
        if (!deferred(axes[k].parameter)) apply_parameter(sc, axes[k].parameter, axes[k].values[idx[k]]);
    for (std::size_t k = 0; k < axes.size(); ++k)
        if (axes[k].parameter == "delta") apply_parameter(sc, "delta", axes[k].values[idx[k]]);
    for (std::size_t k = 0; k < axes.size(); ++k)
        if (axes[k].parameter == "tau_ratio") apply_parameter(sc, "tau_ratio", axes[k].values[idx[k]]);
    if (options.tau_ratio) apply_parameter(sc, "tau_ratio", *options.tau_ratio);

    if (options.reduce_dims && cells >= REDUCED_DIMS_CELLS && sc.dims.size() == 3) {
        const int reduced[3] = {2, 4, 4};
        for (int m = 0; m < 3; ++m) sc.dims[m] = std::min(sc.dims[m], reduced[m]);
        fit_target(sc);
    }

    const SystemParams& p = sc.params;
    const double w = options.nonrwa_window;
    if (sc.picture == Picture::rwa &&
        (std::abs(p.omega1 - p.omega2) <= w || std::abs(p.omega1 - 3.0 * p.omega2) <= w ||
         std::abs(p.omega2 - 3.0 * p.omega1) <= w)) {
        sc.picture = options.nonrwa_picture;
    }

    if (options.fit_horizon && !sc.schedules.empty()) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& s : sc.schedules) {
            const auto [a, b] = s.support();
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        sc.t_start = lo;
        sc.t_end = hi;
        sc.evaluation_time.reset();
    }
    return sc;
}

SweepResult run_sweep(const Scenario& base, const std::vector<SweepAxis>& axes, const std::vector<std::string>& fields,
                      const SweepOptions& options) {
    if (axes.empty() || axes.size() > 2) throw Error(ErrorKind::config, "sweep needs one or two axes");
    for (const auto& a : axes) a.validate();
    if (fields.empty()) throw Error(ErrorKind::config, "sweep needs at least one field");
    const auto& known = sweep_fields();
    bool want_fidelity = false, want_negativity = false;
    for (const auto& f : fields) {
        if (std::find(known.begin(), known.end(), f) == known.end()) {
            throw Error(ErrorKind::config, "unknown sweep field '" + f + "'");
        }
        want_fidelity |= f == "fidelity";
        want_negativity |= f == "peak_negativity";
    }
    if (want_fidelity && !base.target) throw Error(ErrorKind::config, "sweep field 'fidelity' needs a target");

    SweepResult out;
    out.axes = axes;
    out.field_names = fields;
    const std::size_t cells = out.cell_count();
    for (const auto& f : fields) out.fields[f].assign(cells, NaN);
    out.pictures.assign(cells, base.picture);

    std::vector<std::vector<double>> values(cells);
    std::vector<std::optional<SweepFailure>> failed(cells);
    std::vector<int> dims_used = cell_scenario(base, axes, 0, options).dims;

    parallel_for(cells, options.workers, [&](std::size_t c) {
        try {
            Scenario sc = cell_scenario(base, axes, c, options);
            out.pictures[c] = sc.picture;
            sc.metrics = {Metric::n1, Metric::n2, Metric::nc};
            if (want_negativity) sc.metrics.push_back(Metric::negativity);
            if (want_fidelity) sc.metrics.push_back(Metric::fidelity);
            const ScenarioSummary s = run_scenario(sc).summary;
            std::vector<double> row;
            for (const auto& f : fields) {
                if (f == "n1") row.push_back(s.final_n1);
                else if (f == "n2") row.push_back(s.final_n2);
                else if (f == "nc") row.push_back(s.final_nc);
                else if (f == "fidelity") row.push_back(s.final_fidelity);
                else row.push_back(s.peak_negativity);
            }
            values[c] = std::move(row);
        } catch (const Error& e) {
            failed[c] = SweepFailure{c, e.kind(), e.what()};
        } catch (const std::exception& e) {
            failed[c] = SweepFailure{c, ErrorKind::diverged, e.what()};
        }
    });

    for (std::size_t c = 0; c < cells; ++c) {
        if (failed[c]) {
            out.failures.push_back(*failed[c]);
            continue;
        }
        for (std::size_t k = 0; k < fields.size(); ++k) out.fields[fields[k]][c] = values[c][k];
    }
    out.dims = dims_used;
    return out;
}

std::vector<ContourLine> marching_squares(const std::vector<double>& x, const std::vector<double>& y,
                                          const std::vector<double>& f, double level) {
    const std::size_t nx = x.size(), ny = y.size();
    if (nx < 2 || ny < 2) throw Error(ErrorKind::invalid_argument, "marching_squares: need at least a 2x2 grid");
    if (f.size() != nx * ny) throw Error(ErrorKind::invalid_dimension, "marching_squares: field size mismatch");
    auto at = [&](std::size_t i, std::size_t j) { return f[i * ny + j]; };

    // Edge ids: X(i, j) joins (i, j)-(i+1, j); Y(i, j) joins (i, j)-(i, j+1).
    const std::size_t y_base = nx * ny;
    std::unordered_map<std::size_t, std::array<double, 2>> point;
    std::unordered_map<std::size_t, std::vector<std::size_t>> touching;
    std::vector<std::array<std::size_t, 2>> segments;

    auto crossing = [&](std::size_t id, std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
        if (!point.count(id)) {
            const double fa = at(i0, j0), fb = at(i1, j1);
            const double t = (level - fa) / (fb - fa);
            point[id] = {x[i0] + t * (x[i1] - x[i0]), y[j0] + t * (y[j1] - y[j0])};
        }
        return id;
    };
    auto add = [&](std::size_t a, std::size_t b) {
        touching[a].push_back(segments.size());
        touching[b].push_back(segments.size());
        segments.push_back({a, b});
    };

    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            const double v[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            if (std::any_of(v, v + 4, [](double z) { return std::isnan(z); })) continue;
            bool above[4];
            int count = 0;
            for (int k = 0; k < 4; ++k) count += above[k] = v[k] > level;
            if (count == 0 || count == 4) continue;

            std::size_t e[4] = {0, 0, 0, 0};
            bool cut[4];
            for (int k = 0; k < 4; ++k) cut[k] = above[k] != above[(k + 1) % 4];
            if (cut[0]) e[0] = crossing(i * ny + j, i, j, i + 1, j);
            if (cut[1]) e[1] = crossing(y_base + (i + 1) * ny + j, i + 1, j, i + 1, j + 1);
            if (cut[2]) e[2] = crossing(i * ny + j + 1, i, j + 1, i + 1, j + 1);
            if (cut[3]) e[3] = crossing(y_base + i * ny + j, i, j, i, j + 1);

            if (cut[0] && cut[1] && cut[2] && cut[3]) {
                const bool center = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
                if (center == above[0]) {
                    add(e[0], e[1]);
                    add(e[2], e[3]);
                } else {
                    add(e[3], e[0]);
                    add(e[1], e[2]);
                }
            } else {
                std::size_t ends[2], n = 0;
                for (int k = 0; k < 4; ++k)
                    if (cut[k]) ends[n++] = e[k];
                add(ends[0], ends[1]);
            }
        }
    }

    std::vector<bool> used(segments.size(), false);
    std::vector<ContourLine> lines;
    auto trace = [&](std::size_t start_node, std::size_t first_seg) {
        ContourLine line;
        line.level = level;
        line.points.push_back(point[start_node]);
        std::size_t node = start_node, seg = first_seg;
        while (true) {
            used[seg] = true;
            node = segments[seg][0] == node ? segments[seg][1] : segments[seg][0];
            line.points.push_back(point[node]);
            if (node == start_node) {
                line.closed = true;
                break;
            }
            std::size_t next = segments.size();
            for (std::size_t s : touching[node])
                if (!used[s]) next = s;
            if (next == segments.size()) break;
            seg = next;
        }
        lines.push_back(std::move(line));
    };
    // Open lines start at boundary edges (one touching segment); the order of
    // starts follows segment creation so output is deterministic.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (std::size_t node : segments[s]) {
            if (!used[s] && touching[node].size() == 1) trace(node, s);
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) trace(segments[s][0], s);
    return lines;
}

std::vector<ContourLine> extract_contours(const SweepResult& result, const std::string& field,
                                          const std::vector<double>& levels) {
    if (result.axes.size() != 2) throw Error(ErrorKind::invalid_argument, "extract_contours: needs a 2-D sweep");
    const auto it = result.fields.find(field);
    if (it == result.fields.end()) throw Error(ErrorKind::invalid_argument, "extract_contours: unknown field '" + field + "'");
    auto coords = [](const SweepAxis& a) {
        std::vector<double> c = a.values;
        if (a.scale == AxisScale::log)
            for (double& v : c) v = std::log(v);
        return c;
    };
    const std::vector<double> x = coords(result.axes[0]), y = coords(result.axes[1]);
    std::vector<ContourLine> out;
    for (double level : levels) {
        for (auto& line : marching_squares(x, y, it->second, level)) {
            for (auto& p : line.points) {
                if (result.axes[0].scale == AxisScale::log) p[0] = std::exp(p[0]);
                if (result.axes[1].scale == AxisScale::log) p[1] = std::exp(p[1]);
            }
            out.push_back(std::move(line));
        }
    }
    return out;
}

SpotCheck convergence_spot_check(const Scenario& base, const SweepResult& result, const std::string& field,
                                 const SweepOptions& options, std::size_t count, std::uint64_t seed,
                                 const std::vector<int>& dims) {
    const auto it = result.fields.find(field);
    if (it == result.fields.end()) throw Error(ErrorKind::invalid_argument, "spot check: unknown field '" + field + "'");
    std::vector<std::size_t> populated;
    for (std::size_t c = 0; c < it->second.size(); ++c)
        if (!std::isnan(it->second[c])) populated.push_back(c);
    std::mt19937_64 rng(seed);
    std::shuffle(populated.begin(), populated.end(), rng);
    populated.resize(std::min(count, populated.size()));
    std::sort(populated.begin(), populated.end());

    SpotCheck out;
    out.cells = populated;
    out.reference.assign(populated.size(), NaN);
    SweepOptions full = options;
    full.reduce_dims = false;
    std::vector<std::exception_ptr> errors(populated.size());
    parallel_for(populated.size(), options.workers, [&](std::size_t k) {
        try {
            Scenario sc = cell_scenario(base, result.axes, populated[k], full);
            sc.dims = dims;
            fit_target(sc);
            const ScenarioSummary s = run_scenario(sc).summary;
            out.reference[k] = field == "n1"         ? s.final_n1
                               : field == "n2"       ? s.final_n2
                               : field == "nc"       ? s.final_nc
                               : field == "fidelity" ? s.final_fidelity
                                                     : s.peak_negativity;
        } catch (...) {
            errors[k] = std::current_exception();
        }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (std::size_t k = 0; k < populated.size(); ++k) {
        const double ref = out.reference[k];
        const double diff = std::abs(it->second[populated[k]] - ref) / std::max(std::abs(ref), 1e-3);
        out.max_relative_difference = std::max(out.max_relative_difference, diff);
    }
    return out;
}

DegenerateDiagnostics degenerate_mode_diagnostics(const Scenario& scenario) {
    const SystemParams& p = scenario.params;
    if (std::abs(p.omega1 - p.omega2) > 1e-12 * std::max(p.omega1, p.omega2)) {
        throw Error(ErrorKind::invalid_argument, "degenerate_mode_diagnostics: needs omega1 = omega2");
    }
    Scenario sc = scenario;
    sc.picture = Picture::full;
    sc.metrics = {Metric::n1, Metric::n2, Metric::n_plus, Metric::n_minus};
    const ScenarioResult r = run_scenario(sc);
    DegenerateDiagnostics d;
    d.times = r.trajectory.times;
    d.n1 = r.trajectory.observables.at("n1");
    d.n2 = r.trajectory.observables.at("n2");
    d.n_plus = r.trajectory.observables.at("n_plus");
    d.n_minus = r.trajectory.observables.at("n_minus");
    return d;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    const auto old_precision = out.precision(17);
    for (std::size_t k = 0; k < result.axes.size(); ++k) out << (k ? "," : "") << result.axes[k].parameter;
    for (const auto& f : result.field_names) out << ',' << f;
    out << '\n';
    for (std::size_t c = 0; c < result.cell_count(); ++c) {
        const auto xy = result.coordinates(c);
        for (std::size_t k = 0; k < xy.size(); ++k) out << (k ? "," : "") << xy[k];
        for (const auto& f : result.field_names) {
            const double v = result.fields.at(f)[c];
            out << ',';
            if (std::isnan(v)) out << "nan";
            else out << v;
        }
        out << '\n';
    }
    out.precision(old_precision);
}

} // namespace omstirap
