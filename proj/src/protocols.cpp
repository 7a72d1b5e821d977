#include "omstirap/protocols.hpp"

#include "omstirap/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

namespace omstirap {

// --------------------------- Names -------------------------------------------

InitialKind parse_initial_kind(const std::string& name) {
    if (name == "fock") return InitialKind::fock;
    if (name == "superposition_01") return InitialKind::superposition_01;
    if (name == "coherent") return InitialKind::coherent;
    if (name == "thermal") return InitialKind::thermal;
    if (name == "thermal_product") return InitialKind::thermal_product;
    if (name == "heralded") return InitialKind::heralded;
    if (name == "weights") return InitialKind::weights;
    if (name == "explicit") return InitialKind::explicit_matrix;
    throw Error(ErrorKind::config, "unknown initial state kind '" + name + "'");
}

std::string to_string(InitialKind kind) {
    switch (kind) {
    case InitialKind::fock: return "fock";
    case InitialKind::superposition_01: return "superposition_01";
    case InitialKind::coherent: return "coherent";
    case InitialKind::thermal: return "thermal";
    case InitialKind::thermal_product: return "thermal_product";
    case InitialKind::heralded: return "heralded";
    case InitialKind::weights: return "weights";
    case InitialKind::explicit_matrix: return "explicit";
    }
    return "fock";
}

Metric parse_metric(const std::string& name) {
    if (name == "n1") return Metric::n1;
    if (name == "n2") return Metric::n2;
    if (name == "nc") return Metric::nc;
    if (name == "negativity") return Metric::negativity;
    if (name == "fidelity") return Metric::fidelity;
    if (name == "n_plus") return Metric::n_plus;
    if (name == "n_minus") return Metric::n_minus;
    throw Error(ErrorKind::config, "unknown metric '" + name + "'");
}

std::string to_string(Metric metric) {
    switch (metric) {
    case Metric::n1: return "n1";
    case Metric::n2: return "n2";
    case Metric::nc: return "nc";
    case Metric::negativity: return "negativity";
    case Metric::fidelity: return "fidelity";
    case Metric::n_plus: return "n_plus";
    case Metric::n_minus: return "n_minus";
    }
    return "n1";
}

// --------------------------- Initial states and targets ----------------------

namespace {

DensityMatrix vacuum(int dim) {
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = 1.0;
    return DensityMatrix(HilbertSpace({dim}), m);
}

DensityMatrix diagonal(int dim, const std::vector<double>& weights) {
    if (weights.empty() || static_cast<int>(weights.size()) > dim) {
        throw Error(ErrorKind::invalid_argument, "weights: need between 1 and dim entries");
    }
    double total = 0.0;
    Matrix m = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) throw Error(ErrorKind::invalid_argument, "weights: negative entry");
        m(i, i) = weights[i];
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorKind::invalid_argument, "weights: must sum to 1");
    return DensityMatrix(HilbertSpace({dim}), m / total);
}

DensityMatrix mode1_state(const InitialStateSpec& spec, int dim) {
    switch (spec.kind) {
    case InitialKind::fock: {
        if (spec.n < 0 || spec.n >= dim) throw Error(ErrorKind::out_of_range, "initial: Fock level outside mode 1");
        return DensityMatrix::pure(StateVector(HilbertSpace({dim}), Vector::Unit(dim, spec.n)));
    }
    case InitialKind::superposition_01: {
        Vector v = Vector::Zero(dim);
        v(0) = v(1) = 1.0 / std::sqrt(2.0);
        return DensityMatrix::pure(StateVector(HilbertSpace({dim}), v));
    }
    case InitialKind::coherent: return DensityMatrix::pure(coherent_state(dim, spec.alpha));
    case InitialKind::thermal:
    case InitialKind::thermal_product: return thermal_state(dim, spec.nbar);
    case InitialKind::heralded:
        return heralded_initial_state(thermal_state(dim - 1, spec.blue_nbar), spec.signal_rate, spec.dcr);
    case InitialKind::weights: return diagonal(dim, spec.weights);
    case InitialKind::explicit_matrix: break;
    }
    throw Error(ErrorKind::invalid_argument, "initial: no single-mode form");
}

} // namespace

DensityMatrix prepare_initial_state(const InitialStateSpec& spec, const HilbertSpace& space) {
    if (space.mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "initial: need 3 modes");
    if (spec.kind == InitialKind::explicit_matrix) {
        if (!spec.matrix) throw Error(ErrorKind::invalid_argument, "initial: explicit kind without a matrix");
        return DensityMatrix(space, *spec.matrix);
    }
    const DensityMatrix m1 = mode1_state(spec, space.dim(mech1));
    const DensityMatrix m2 = spec.kind == InitialKind::thermal_product ? thermal_state(space.dim(mech2), spec.nbar)
                                                                      : vacuum(space.dim(mech2));
    const DensityMatrix factors[] = {vacuum(space.dim(cavity)), m1, m2};
    return tensor_product(factors);
}

std::vector<double> table_initial_weights() { return {0.0, 0.89, 0.10, 0.01}; }

DensityMatrix target_mode2_copy(const std::vector<double>& weights, const HilbertSpace& mech_space) {
    const DensityMatrix factors[] = {vacuum(mech_space.dim(0)), diagonal(mech_space.dim(1), weights)};
    return tensor_product(factors);
}

DensityMatrix target_minus_superposition(const HilbertSpace& mech_space) {
    Vector v = Vector::Zero(mech_space.total_dim());
    v(mech_space.index(std::vector<int>{0, 0})) = 1.0 / std::sqrt(2.0);
    v(mech_space.index(std::vector<int>{0, 1})) = -1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(StateVector(mech_space, v));
}

DensityMatrix target_bell_minus(const HilbertSpace& mech_space) {
    Vector v = Vector::Zero(mech_space.total_dim());
    v(mech_space.index(std::vector<int>{0, 1})) = 1.0 / std::sqrt(2.0);
    v(mech_space.index(std::vector<int>{1, 0})) = -1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(StateVector(mech_space, v));
}

DensityMatrix target_fock(const HilbertSpace& mech_space, int n1, int n2) {
    return DensityMatrix::pure(StateVector(mech_space, Vector::Unit(mech_space.total_dim(), mech_space.index(std::vector<int>{n1, n2}))));
}

// --------------------------- Scenario ----------------------------------------

void Scenario::validate() const {
    if (!(t_start < t_end)) throw Error(ErrorKind::invalid_argument, "scenario: t_start must be < t_end");
    if (sample_count < 2) throw Error(ErrorKind::invalid_argument, "scenario: sample_count must be >= 2");
    if (dims.size() != 3) throw Error(ErrorKind::invalid_dimension, "scenario: dims must list 3 modes");
    params.validate();
    for (const auto& s : schedules) s.validate();
    if (evaluation_time && !(*evaluation_time >= t_start && *evaluation_time <= t_end)) {
        throw Error(ErrorKind::out_of_range, "scenario: evaluation time outside the horizon");
    }
    if (target) {
        const HilbertSpace mech({dims[1], dims[2]});
        if (!(target->space() == mech)) throw Error(ErrorKind::invalid_dimension, "scenario: target must live on (d1, d2)");
    }
}

std::vector<double> Scenario::sample_times() const {
    std::vector<double> ts(sample_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
        ts[i] = t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(sample_count - 1);
    }
    ts.back() = t_end;
    if (evaluation_time) {
        const double te = *evaluation_time;
        const double tol = 1e-12 * (t_end - t_start);
        const bool present = std::any_of(ts.begin(), ts.end(), [&](double t) { return std::abs(t - te) <= tol; });
        if (!present) ts.insert(std::upper_bound(ts.begin(), ts.end(), te), te);
    }
    return ts;
}

ScenarioResult run_scenario(const Scenario& sc) {
    sc.validate();
    const auto wall0 = std::chrono::steady_clock::now();
    const HilbertSpace space = sc.space();
    const HamiltonianSpec spec{sc.params, sc.schedules, space, sc.picture};
    const LindbladModel model = make_lindblad_model(spec);
    const DensityMatrix rho0 = prepare_initial_state(sc.initial, space);

    IntegratorConfig cfg;
    cfg.rel_tol = sc.rel_tol;
    cfg.abs_tol = sc.abs_tol;
    cfg.max_step = sc.max_step;
    cfg.sample_times = sc.sample_times();
    cfg.keep_states = false;

    const double t_eval = sc.evaluation_time.value_or(sc.t_end);
    const double tol = 1e-12 * (sc.t_end - sc.t_start);

    auto has = [&](Metric m) { return std::find(sc.metrics.begin(), sc.metrics.end(), m) != sc.metrics.end(); };
    const Operator n1 = number_operator(space, mech1), n2 = number_operator(space, mech2), nc = number_operator(space, cavity);
    std::optional<CollectiveModes> modes;
    if (has(Metric::n_plus) || has(Metric::n_minus)) {
        modes = collective_operators(sc.params, {}, 0.0, ModeConvention::static_couplings, space);
    }

    std::map<std::string, std::vector<double>> obs;
    ScenarioSummary summary;
    summary.evaluation_time = t_eval;
    summary.final_fidelity = std::numeric_limits<double>::quiet_NaN();
    summary.peak_negativity = 0.0;
    std::optional<DensityMatrix> eval_state, last_state;

    auto observer = [&](std::size_t, double t, const DensityMatrix& rho) {
        std::optional<DensityMatrix> mech;
        auto mech_state = [&]() -> const DensityMatrix& {
            if (!mech) mech = mechanical_state(rho);
            return *mech;
        };
        if (has(Metric::n1)) obs["n1"].push_back(expectation(n1, rho).real());
        if (has(Metric::n2)) obs["n2"].push_back(expectation(n2, rho).real());
        if (has(Metric::nc)) obs["nc"].push_back(expectation(nc, rho).real());
        if (has(Metric::negativity)) {
            const double neg = negativity(mech_state());
            obs["negativity"].push_back(neg);
            if (neg > summary.peak_negativity) {
                summary.peak_negativity = neg;
                summary.peak_negativity_time = t;
            }
        }
        if (has(Metric::fidelity)) {
            obs["fidelity"].push_back(sc.target ? fidelity(mech_state(), *sc.target) : std::numeric_limits<double>::quiet_NaN());
        }
        if (modes) {
            if (has(Metric::n_plus)) obs["n_plus"].push_back(expectation(modes->b_plus.adjoint() * modes->b_plus, rho).real());
            if (has(Metric::n_minus)) obs["n_minus"].push_back(expectation(modes->b_minus.adjoint() * modes->b_minus, rho).real());
        }
        obs["alpha1"].push_back(std::abs(drive_amplitude(sc.schedules, 1, t)));
        obs["alpha2"].push_back(std::abs(drive_amplitude(sc.schedules, 2, t)));
        if (std::abs(t - t_eval) <= tol) {
            eval_state = rho;
            if (sc.target) summary.final_fidelity = fidelity(mech_state(), *sc.target);
        }
        last_state = rho;
    };

    Trajectory traj = evolve(model, rho0, cfg, observer);
    traj.observables = std::move(obs);

    summary.final_n1 = expectation(n1, *eval_state).real();
    summary.final_n2 = expectation(n2, *eval_state).real();
    summary.final_nc = expectation(nc, *eval_state).real();
    summary.accepted_steps = traj.accepted_steps;
    summary.rejected_steps = traj.rejected_steps;
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return ScenarioResult{std::move(traj), summary, std::move(*eval_state), std::move(*last_state)};
}

// --------------------------- Analytic oracle ---------------------------------

StateVector analytic_final_state(const StateVector& initial, double theta) {
    const HilbertSpace& s = initial.space();
    if (s.mode_count() != 3) throw Error(ErrorKind::invalid_dimension, "analytic_final_state: need 3 modes");
    const Vector& v = initial.amplitudes();
    std::vector<cplx> c(s.dim(mech1), 0.0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const auto occ = s.multi_index(i);
        if (occ[cavity] == 0 && occ[mech2] == 0) {
            c[occ[mech1]] = v(i);
        } else if (std::abs(v(i)) > 1e-12) {
            throw Error(ErrorKind::invalid_argument, "analytic_final_state: cavity and mode 2 must start in vacuum");
        }
    }
    const double ct = std::cos(theta), st = std::sin(theta);
    Vector out = Vector::Zero(v.size());
    for (int n = 0; n < static_cast<int>(c.size()); ++n) {
        if (c[n] == 0.0) continue;
        for (int k = 0; k <= n; ++k) {
            // binomial term of (cos b1^dag - sin b2^dag)^n |0,0> / sqrt(n!)
            const double logmag = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                                  0.5 * (std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0) - std::lgamma(n + 1.0));
            const double coef = std::exp(logmag) * std::pow(ct, k) * std::pow(-st, n - k);
            if (coef == 0.0) continue;
            if (k >= s.dim(mech1) || n - k >= s.dim(mech2)) {
                if (std::abs(c[n] * coef) > 1e-12) {
                    throw Error(ErrorKind::truncation, "analytic_final_state: mode 2 cannot hold the transferred state");
                }
                continue;
            }
            out(s.index(std::vector<int>{0, k, n - k})) += c[n] * coef;
        }
    }
    return StateVector::normalized(s, out);
}

// --------------------------- Heralding ---------------------------------------

DensityMatrix heralded_initial_state(const DensityMatrix& rho_blue, double signal_rate, double dcr) {
    if (rho_blue.space().mode_count() != 1) throw Error(ErrorKind::invalid_dimension, "heralded: need a single mode");
    if (!(signal_rate >= 0.0) || !(dcr >= 0.0)) throw Error(ErrorKind::invalid_argument, "heralded: rates must be >= 0");
    const double total = signal_rate + dcr;
    if (!(total > 0.0)) throw Error(ErrorKind::invalid_argument, "heralded: total click rate is zero");
    const auto d = rho_blue.matrix().rows();
    Matrix out = Matrix::Zero(d + 1, d + 1);
    out.topLeftCorner(d, d) = (dcr / total) * rho_blue.matrix();
    for (Eigen::Index n = 0; n < d; ++n) out(n + 1, n + 1) += (signal_rate / total) * rho_blue.matrix()(n, n).real();
    return DensityMatrix(HilbertSpace({static_cast<int>(d + 1)}), out);
}

// --------------------------- Interferometry ----------------------------------

FringeFit fit_fringe(const std::vector<double>& phi2, const std::vector<double>& y) {
    if (phi2.size() != y.size() || phi2.size() < 3) throw Error(ErrorKind::invalid_argument, "fit_fringe: need >= 3 points");
    const auto n = static_cast<Eigen::Index>(phi2.size());
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = std::cos(phi2[i]);
        a(i, 2) = std::sin(phi2[i]);
        b(i) = y[i];
    }
    const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
    FringeFit f;
    f.amplitude = x(0);
    const double r = std::hypot(x(1), x(2));
    f.visibility = x(0) != 0.0 ? r / std::abs(x(0)) : 0.0;
    // A V cos(phi1 - phi2) = A V (cos phi1 cos phi2 + sin phi1 sin phi2)
    f.phase = std::atan2(x(2), x(1));
    return f;
}

InterferometryResult run_interferometry(const Scenario& base, const std::vector<double>& phi2_grid, double phi1,
                                        double wait, const InterferometryOptions& options) {
    if (base.schedules.empty()) throw Error(ErrorKind::invalid_argument, "interferometry: base needs a forward schedule");
    if (!(wait > 0.0)) throw Error(ErrorKind::invalid_argument, "interferometry: wait must be > 0");
    if (phi2_grid.empty()) throw Error(ErrorKind::invalid_argument, "interferometry: empty phase grid");

    DriveSchedule forward = base.schedules.front();
    forward.phase2 = phi1;
    const double lead = forward.center - base.t_start;
    if (!(lead > 0.0)) throw Error(ErrorKind::invalid_argument, "interferometry: horizon must start before the forward center");

    const std::size_t count = phi2_grid.size();
    std::vector<FringePoint> points(count);
    std::vector<std::exception_ptr> errors(count);
    const HilbertSpace space = base.space();
    const Operator n1 = number_operator(space, mech1);

    parallel_for(count, options.workers, [&](std::size_t i) {
        try {
            Scenario sc = base;
            DriveSchedule reverse = forward;
            reverse.kind = PulseKind::reversed_fractional;
            reverse.center = forward.center + wait;
            reverse.phase2 = phi2_grid[i];
            sc.schedules = {forward, reverse};
            sc.t_start = options.inject_after_forward ? forward.center + 0.5 * wait : base.t_start;
            sc.t_end = reverse.center + lead;
            sc.evaluation_time.reset();
            sc.target.reset();
            sc.metrics = {Metric::n1};
            sc.sample_count = 2;
            const ScenarioResult r = run_scenario(sc);
            const DensityMatrix m1 = partial_trace(r.final_state, {{mech1}});
            points[i] = FringePoint{phi2_grid[i], expectation(n1, r.final_state).real(), m1.matrix()(1, 1).real()};
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    InterferometryResult out;
    out.points = std::move(points);
    std::vector<double> ph, yn, yp;
    for (const auto& p : out.points) {
        ph.push_back(p.phi2);
        yn.push_back(p.n1);
        yp.push_back(p.p1);
    }
    if (count >= 3) {
        out.fit_n1 = fit_fringe(ph, yn);
        out.fit_p1 = fit_fringe(ph, yp);
    }
    return out;
}

// --------------------------- Planner -----------------------------------------

void PlannerInputs::validate() const {
    for (double e : {eta_d, eta_r, stokes_probability}) {
        if (!(e >= 0.0 && e <= 1.0)) throw Error(ErrorKind::invalid_argument, "planner: efficiencies and p must lie in [0, 1]");
    }
    if (!(rho00 >= 0.0 && rho00 <= 1.0)) throw Error(ErrorKind::invalid_argument, "planner: rho00 must lie in [0, 1]");
    for (double r : {g, kappa, omega_m, gamma_m, n_th, cool_duration, blue_duration, read_g, read_duration, dcr}) {
        if (!(r >= 0.0)) throw Error(ErrorKind::invalid_argument, "planner: rates and durations must be >= 0");
    }
}

PlannerInputs reference_planner_inputs() {
    const SystemParams p = table_params(0.1);
    PlannerInputs in;
    in.g = TWO_PI * 1600.0;
    in.kappa = p.kappa;
    in.omega_m = p.omega1;
    in.delta = -p.omega1;
    in.gamma_m = p.gamma1;
    in.n_th = bose_occupancy(p.omega1, 0.1);
    in.cool_duration = 5e-3;
    in.blue_duration = 0.1e-3;
    in.read_g = TWO_PI * 5000.0;
    in.read_duration = 0.5e-3;
    in.eta_d = 0.075;
    in.eta_r = 0.99;
    in.dcr = 10.0;
    in.stokes_probability = 0.1;
    in.rho00 = 0.0;
    return in;
}

double visibility_model(const PlannerInputs& in, double wait) {
    in.validate();
    if (!(wait >= 0.0)) throw Error(ErrorKind::invalid_argument, "visibility_model: wait must be >= 0");
    const double rate = 0.5 * (in.kappa + in.gamma_m) + in.gamma_m * in.n_th;
    if (std::isinf(wait)) return rate > 0.0 ? 0.0 : in.eta_d * in.eta_r;
    return in.eta_d * in.eta_r * std::exp(-rate * wait);
}

namespace {

double lorentz(double kappa, double x) { return kappa / (0.25 * kappa * kappa + x * x); }

double gamma_opt(double g, double kappa, double delta, double omega) {
    return g * g * (lorentz(kappa, delta + omega) - lorentz(kappa, delta - omega));
}

} // namespace

CoolingResult cooling_steady_state(const PlannerInputs& in) {
    in.validate();
    if (!(in.kappa > 0.0) || !(in.omega_m > 0.0)) throw Error(ErrorKind::domain, "cooling: kappa and omega_m must be > 0");
    CoolingResult r;
    r.gamma_opt = gamma_opt(in.g, in.kappa, in.delta, in.omega_m);
    const double k2 = 0.25 * in.kappa * in.kappa;
    const double ratio = (k2 + (in.delta - in.omega_m) * (in.delta - in.omega_m)) /
                         (k2 + (in.delta + in.omega_m) * (in.delta + in.omega_m));
    r.n_min = 1.0 / (ratio - 1.0);
    const double denom = r.gamma_opt + in.gamma_m;
    if (denom == 0.0) throw Error(ErrorKind::undefined_steady_state, "cooling: Gamma_opt + Gamma_m = 0");
    r.n_final = (r.gamma_opt * r.n_min + in.n_th * in.gamma_m) / denom;
    return r;
}

DetectionBudget detection_budget(const PlannerInputs& in) {
    in.validate();
    const double eta = in.eta_d;
    if (!(eta > 0.0) || !(in.stokes_probability > 0.0)) {
        throw Error(ErrorKind::domain, "detection_budget: efficiency and Stokes probability must be > 0");
    }
    DetectionBudget b;
    b.herald_time = (in.cool_duration + in.blue_duration) / (in.stokes_probability * eta);
    b.final_probability = eta * (1.0 - in.rho00);
    b.readout_time = b.final_probability > 0.0 ? b.herald_time / b.final_probability : std::numeric_limits<double>::infinity();
    if (!(in.kappa > 0.0)) throw Error(ErrorKind::domain, "detection_budget: kappa must be > 0");
    b.readout_success = 1.0 - std::exp(-gamma_opt(in.read_g, in.kappa, in.delta, in.omega_m) * in.read_duration);
    return b;
}

} // namespace omstirap
