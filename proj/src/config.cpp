#include "omstirap/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omstirap {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::config, "config: '" + where + "' " + what);
}

bool has_unit_suffix(const std::string& key) {
    for (const char* s : {"_hz", "_s", "_k"}) {
        const std::string suf(s);
        if (key.size() > suf.size() && key.compare(key.size() - suf.size(), suf.size(), suf) == 0) return true;
    }
    return false;
}

std::string stem(const std::string& key) {
    const auto p = key.rfind('_');
    return p == std::string::npos ? key : key.substr(0, p);
}

// Reads one JSON object, rejecting unknown keys, and records every value it
// hands out (given or defaulted) so the effective config can be emitted.
class Reader {
public:
    Reader(const Json* in, std::string path, std::vector<std::string> allowed)
        : in_(in), path_(std::move(path)), out_(Json::object()) {
        if (in_ && in_->is_null()) in_ = nullptr;
        if (in_ && !in_->is_object()) fail(path_, "must be an object");
        if (!in_) return;
        for (const auto& item : in_->items()) {
            const std::string& k = item.key();
            if (std::find(allowed.begin(), allowed.end(), k) != allowed.end()) continue;
            for (const auto& a : allowed) {
                if (!has_unit_suffix(a)) continue;
                if (stem(a) == k) fail(where(k), "is missing its unit suffix (expected '" + a + "')");
                if (stem(a) == stem(k)) fail(where(k), "has a malformed unit suffix (expected '" + a + "')");
            }
            fail(where(k), "is not a known key");
        }
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json* get(const std::string& key) const {
        return in_ && in_->contains(key) && !(*in_)[key].is_null() ? &(*in_)[key] : nullptr;
    }
    bool has(const std::string& key) const { return get(key) != nullptr; }

    double number(const std::string& key, double def) {
        double v = def;
        if (const Json* j = get(key)) {
            if (!j->is_number()) fail(where(key), "must be a number");
            v = j->get<double>();
        }
        if (!std::isfinite(v)) fail(where(key), "must be finite");
        out_[key] = v;
        return v;
    }

    // The one place where config frequencies (value / 2pi, Hz) become rad/s.
    double angular(const std::string& key, double def_hz) { return TWO_PI * number(key, def_hz); }

    long long integer(const std::string& key, long long def) {
        long long v = def;
        if (const Json* j = get(key)) {
            if (!j->is_number_integer()) fail(where(key), "must be an integer");
            v = j->get<long long>();
        }
        out_[key] = v;
        return v;
    }

    std::string text(const std::string& key, const std::string& def) {
        std::string v = def;
        if (const Json* j = get(key)) {
            if (!j->is_string()) fail(where(key), "must be a string");
            v = j->get<std::string>();
        }
        out_[key] = v;
        return v;
    }

    bool flag(const std::string& key, bool def) {
        bool v = def;
        if (const Json* j = get(key)) {
            if (!j->is_boolean()) fail(where(key), "must be true or false");
            v = j->get<bool>();
        }
        out_[key] = v;
        return v;
    }

    std::vector<double> numbers(const std::string& key, const std::vector<double>& def) {
        std::vector<double> v = def;
        if (const Json* j = get(key)) {
            if (!j->is_array()) fail(where(key), "must be an array of numbers");
            v.clear();
            for (const auto& e : *j) {
                if (!e.is_number()) fail(where(key), "must be an array of numbers");
                v.push_back(e.get<double>());
                if (!std::isfinite(v.back())) fail(where(key), "must hold finite numbers");
            }
        }
        out_[key] = v;
        return v;
    }

    void put(const std::string& key, Json value) { out_[key] = std::move(value); }
    Json take() { return std::move(out_); }

private:
    const Json* in_;
    std::string path_;
    Json out_;
};

// Wraps module-level invariant violations as config errors.
template <class Fn>
void check(const std::string& where, Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) throw;
        fail(where, std::string("is invalid: ") + e.what());
    }
}

SystemParams read_system(Reader& r) {
    SystemParams p;
    const double w1 = r.number("omega1_hz", 1.2e6);
    const double w2 = r.number("omega2_hz", 1.8e6);
    p.omega1 = TWO_PI * w1;
    p.omega2 = TWO_PI * w2;
    p.omega_c = r.angular("omega_c_hz", 540e12);
    p.g1 = r.angular("g1_hz", 2.5);
    p.g2 = r.angular("g2_hz", 2.5);
    p.delta1 = r.angular("delta1_hz", w1);
    p.delta2 = r.angular("delta2_hz", w2);
    p.kappa = r.angular("kappa_hz", 2e3);
    const double q1 = r.number("q1", 1e9), q2 = r.number("q2", 1e9);
    p.temperature = r.number("temperature_k", 0.01);
    p.set_quality_factors(q1, q2);
    check("system", [&] { p.validate(); });
    return p;
}

DriveSchedule read_schedule(Reader& r, const std::string& where) {
    DriveSchedule s;
    s.kind = parse_pulse_kind(r.text("kind", "stirap"));
    s.alpha0 = r.number("alpha0", 2000.0);
    const bool stirap = s.kind == PulseKind::stirap;
    const double sigma = r.has("sigma_s") ? r.number("sigma_s", 0.6e-3) : 0.6e-3;
    s.sigma1 = r.number("sigma1_s", sigma);
    s.sigma2 = r.number("sigma2_s", sigma);
    s.tau = r.number("tau_s", s.sigma1 / (stirap ? 1.43 : 1.25));
    s.theta = r.number("theta", stirap ? PI / 2 : PI / 4);
    s.phase1 = r.number("phase1", 0.0);
    s.phase2 = r.number("phase2", 0.0);
    s.center = r.number("center_s", 0.0);
    check(where, [&] { s.validate(); });
    return s;
}

const std::vector<std::string> SCHEDULE_KEYS{"kind",  "alpha0", "sigma_s", "sigma1_s", "sigma2_s", "tau_s",
                                            "theta", "phase1", "phase2",  "center_s"};

InitialStateSpec read_initial(Reader& r) {
    InitialStateSpec in;
    in.kind = parse_initial_kind(r.text("kind", "fock"));
    switch (in.kind) {
    case InitialKind::fock: in.n = static_cast<int>(r.integer("n", 1)); break;
    case InitialKind::coherent: in.alpha = cplx(r.number("alpha_re", 1.0), r.number("alpha_im", 0.0)); break;
    case InitialKind::thermal:
    case InitialKind::thermal_product: in.nbar = r.number("nbar", 0.0); break;
    case InitialKind::weights: in.weights = r.numbers("weights", table_initial_weights()); break;
    case InitialKind::heralded:
        in.blue_nbar = r.number("blue_nbar", 0.2034);
        in.signal_rate = r.number("signal_rate_hz", 75.0);
        in.dcr = r.number("dcr_hz", 10.0);
        break;
    case InitialKind::superposition_01: break;
    case InitialKind::explicit_matrix: fail("initial.kind", "'explicit' cannot be given in a config file");
    }
    return in;
}

std::optional<DensityMatrix> read_target(Reader& r, const std::vector<int>& dims) {
    const std::string kind = r.text("kind", "none");
    const HilbertSpace mech({dims[1], dims[2]});
    if (kind == "none") return std::nullopt;
    if (kind == "mode2_copy") return target_mode2_copy(r.numbers("weights", table_initial_weights()), mech);
    if (kind == "minus_superposition") return target_minus_superposition(mech);
    if (kind == "bell_minus") return target_bell_minus(mech);
    if (kind == "fock") {
        const int a = static_cast<int>(r.integer("n1", 0)), b = static_cast<int>(r.integer("n2", 1));
        return target_fock(mech, a, b);
    }
    fail("target.kind", "must be none, mode2_copy, minus_superposition, bell_minus or fock");
}

struct AxisUnit {
    const char* column;
    const char* parameter;
    double factor;
};

const AxisUnit AXIS_UNITS[] = {
    {"kappa_hz", "kappa", TWO_PI},   {"omega1_hz", "omega1", TWO_PI}, {"omega2_hz", "omega2", TWO_PI},
    {"delta_hz", "delta", TWO_PI},   {"g1_hz", "g1", TWO_PI},         {"g2_hz", "g2", TWO_PI},
    {"g_hz", "g", TWO_PI},           {"temperature_k", "temperature", 1.0},
    {"q", "q", 1.0},                 {"q1", "q1", 1.0},               {"q2", "q2", 1.0},
    {"alpha0", "alpha0", 1.0},       {"tau_s", "tau", 1.0},           {"sigma_s", "sigma", 1.0},
    {"sigma1_s", "sigma1", 1.0},     {"sigma2_s", "sigma2", 1.0},     {"theta", "theta", 1.0},
    {"tau_ratio", "tau_ratio", 1.0},
};

std::vector<double> grid_values(Reader& r, const std::string& where, AxisScale scale) {
    if (r.has("values")) {
        if (r.has("start") || r.has("stop") || r.has("count")) fail(where, "takes either values or start/stop/count");
        return r.numbers("values", {});
    }
    const double a = r.number("start", 0.0), b = r.number("stop", 1.0);
    const long long n = r.integer("count", 41);
    if (n < 1) fail(where + ".count", "must be >= 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        if (scale == AxisScale::log) {
            if (!(a > 0.0 && b > 0.0)) fail(where, "log axis needs positive start and stop");
            v[i] = std::exp(std::log(a) + f * (std::log(b) - std::log(a)));
        } else {
            v[i] = a + f * (b - a);
        }
    }
    if (n > 1) v.back() = b;
    return v;
}

SweepBlock read_sweep(const Json* in, Json& effective) {
    Reader r(in, "sweep", {"axes", "fields", "levels", "tau_ratio", "nonrwa_window_hz", "nonrwa_picture",
                           "reduce_dims", "fit_horizon", "spot_check"});
    SweepBlock b;
    const Json* axes = r.get("axes");
    if (!axes || !axes->is_array() || axes->empty() || axes->size() > 2) fail("sweep.axes", "must list one or two axes");
    Json axes_out = Json::array();
    for (std::size_t k = 0; k < axes->size(); ++k) {
        const std::string where = "sweep.axes[" + std::to_string(k) + "]";
        Reader a(&(*axes)[k], where, {"parameter", "values", "start", "stop", "count", "scale"});
        const std::string column = a.text("parameter", "");
        const AxisUnit* unit = nullptr;
        for (const auto& u : AXIS_UNITS)
            if (column == u.column) unit = &u;
        if (!unit) {
            for (const auto& u : AXIS_UNITS) {
                if (std::string(u.column) != u.parameter && (column == u.parameter || stem(column) == u.parameter)) {
                    fail(where + ".parameter", "'" + column + "' has a missing or malformed unit suffix (expected '" +
                                                   u.column + "')");
                }
            }
            fail(where + ".parameter", "'" + column + "' is not a sweepable parameter");
        }
        AxisScale scale = AxisScale::linear;
        check(where + ".scale", [&] { scale = parse_axis_scale(a.text("scale", "linear")); });
        const std::vector<double> values = grid_values(a, where, scale);
        a.put("values", values);
        Json ao = a.take();
        ao.erase("start");
        ao.erase("stop");
        ao.erase("count");
        axes_out.push_back(std::move(ao));

        SweepAxis axis{unit->parameter, {}, scale};
        for (double v : values) axis.values.push_back(v * unit->factor);
        check(where, [&] { axis.validate(); });
        b.axes.push_back(std::move(axis));
        b.axis_columns.push_back(column);
        b.axis_values.push_back(values);
    }
    r.put("axes", axes_out);

    const Json* fields = r.get("fields");
    if (fields) {
        if (!fields->is_array() || fields->empty()) fail("sweep.fields", "must be a non-empty array of names");
        b.fields.clear();
        for (const auto& f : *fields) {
            if (!f.is_string()) fail("sweep.fields", "must be a non-empty array of names");
            b.fields.push_back(f.get<std::string>());
            const auto& known = sweep_fields();
            if (std::find(known.begin(), known.end(), b.fields.back()) == known.end()) {
                fail("sweep.fields", "has unknown field '" + b.fields.back() + "'");
            }
        }
    }
    r.put("fields", b.fields);
    b.levels = r.numbers("levels", {0.80, 0.95, 0.99});
    if (r.has("tau_ratio")) {
        b.options.tau_ratio = r.number("tau_ratio", 1.43);
        if (!(*b.options.tau_ratio > 0.0)) fail("sweep.tau_ratio", "must be positive");
    }
    b.options.nonrwa_window = r.angular("nonrwa_window_hz", 0.0);
    if (b.options.nonrwa_window < 0.0) fail("sweep.nonrwa_window_hz", "must be >= 0");
    check("sweep.nonrwa_picture", [&] { b.options.nonrwa_picture = parse_picture(r.text("nonrwa_picture", "full")); });
    b.options.reduce_dims = r.flag("reduce_dims", true);
    b.options.fit_horizon = r.flag("fit_horizon", true);
    b.spot_check = r.flag("spot_check", false);
    effective = r.take();
    return b;
}

} // namespace

Json merge_config(const Json& base, const Json& overlay) {
    if (!base.is_object() || !overlay.is_object()) return overlay;
    Json out = base;
    for (const auto& item : overlay.items()) {
        if (out.contains(item.key())) out[item.key()] = merge_config(out[item.key()], item.value());
        else out[item.key()] = item.value();
    }
    return out;
}

RunConfig parse_config(const Json& input) {
    Reader root(&input, "", {"system", "schedules", "schedule", "initial", "dims", "picture", "horizon", "integrator",
                             "target", "sweep", "verify", "plan", "adiabaticity", "workers"});
    RunConfig rc;
    Scenario& sc = rc.scenario;

    {
        Reader r(root.get("system"), "system",
                 {"omega1_hz", "omega2_hz", "omega_c_hz", "g1_hz", "g2_hz", "delta1_hz", "delta2_hz", "kappa_hz", "q1",
                  "q2", "temperature_k"});
        sc.params = read_system(r);
        root.put("system", r.take());
    }

    {
        if (root.has("schedule") && root.has("schedules")) fail("schedules", "conflicts with 'schedule'");
        Json list = Json::array();
        if (const Json* many = root.get("schedules")) {
            if (!many->is_array() || many->empty()) fail("schedules", "must be a non-empty array");
            list = *many;
        } else {
            list.push_back(root.get("schedule") ? *root.get("schedule") : Json::object());
        }
        Json out = Json::array();
        for (std::size_t k = 0; k < list.size(); ++k) {
            const std::string where = "schedules[" + std::to_string(k) + "]";
            Reader r(&list[k], where, SCHEDULE_KEYS);
            sc.schedules.push_back(read_schedule(r, where));
            Json o = r.take();
            out.push_back(std::move(o));
        }
        root.put("schedules", out);
    }

    {
        Reader r(root.get("initial"), "initial",
                 {"kind", "n", "alpha_re", "alpha_im", "nbar", "weights", "blue_nbar", "signal_rate_hz", "dcr_hz"});
        sc.initial = read_initial(r);
        root.put("initial", r.take());
    }

    {
        std::vector<int> dims{2, 5, 5};
        if (const Json* d = root.get("dims")) {
            if (!d->is_array() || d->size() != 3) fail("dims", "must list three mode dimensions");
            dims.clear();
            for (const auto& e : *d) {
                if (!e.is_number_integer() || e.get<long long>() < 1) fail("dims", "must hold positive integers");
                dims.push_back(e.get<int>());
            }
        }
        sc.dims = dims;
        root.put("dims", dims);
    }
    {
        const Json* pj = root.get("picture");
        if (pj && !pj->is_string()) fail("picture", "must be a string");
        const std::string name = pj ? pj->get<std::string>() : "rwa";
        check("picture", [&] { sc.picture = parse_picture(name); });
        root.put("picture", name);
    }

    {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& s : sc.schedules) {
            const auto [a, b] = s.support();
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        if (!std::isfinite(lo)) lo = 0.0;
        if (!std::isfinite(hi)) hi = 1e-3;
        Reader r(root.get("horizon"), "horizon", {"t_start_s", "t_end_s", "samples", "evaluation_time_s"});
        sc.t_start = r.number("t_start_s", lo);
        sc.t_end = r.number("t_end_s", hi);
        const long long n = r.integer("samples", 201);
        if (n < 2) fail("horizon.samples", "must be >= 2");
        sc.sample_count = static_cast<std::size_t>(n);
        if (r.has("evaluation_time_s")) sc.evaluation_time = r.number("evaluation_time_s", 0.0);
        root.put("horizon", r.take());
    }

    {
        Reader r(root.get("integrator"), "integrator", {"rel_tol", "abs_tol", "max_step_s"});
        sc.rel_tol = r.number("rel_tol", 1e-8);
        sc.abs_tol = r.number("abs_tol", 1e-10);
        sc.max_step = r.number("max_step_s", 0.0);
        if (!(sc.rel_tol > 0.0) || !(sc.abs_tol > 0.0) || sc.max_step < 0.0) {
            fail("integrator", "needs positive tolerances and max_step_s >= 0");
        }
        root.put("integrator", r.take());
    }

    {
        Reader r(root.get("target"), "target", {"kind", "weights", "n1", "n2"});
        check("target", [&] { sc.target = read_target(r, sc.dims); });
        root.put("target", r.take());
    }

    check("scenario", [&] {
        sc.validate();
        (void)prepare_initial_state(sc.initial, sc.space());
    });

    if (root.has("workers")) {
        const long long w = root.integer("workers", 1);
        if (w < 1) fail("workers", "must be >= 1");
        rc.workers = static_cast<std::size_t>(w);
    }

    if (root.has("sweep")) {
        Json eff;
        rc.sweep = read_sweep(root.get("sweep"), eff);
        root.put("sweep", eff);
        if (rc.sweep->fields.end() != std::find(rc.sweep->fields.begin(), rc.sweep->fields.end(), "fidelity") &&
            !sc.target) {
            fail("sweep.fields", "requests fidelity but the target kind is none");
        }
    }

    if (root.has("verify")) {
        Reader r(root.get("verify"), "verify", {"phi1", "phi2", "phi2_count", "wait_s", "inject_after_forward"});
        VerifyBlock v;
        v.phi1 = r.number("phi1", 0.0);
        if (r.has("phi2")) {
            if (r.has("phi2_count")) fail("verify.phi2_count", "conflicts with 'phi2'");
            v.phi2 = r.numbers("phi2", {});
        } else {
            // Uniform grid over [-2 pi, 2 pi]; the effective config lists it explicitly.
            Reader grid(root.get("verify"), "verify", {"phi1", "phi2", "phi2_count", "wait_s", "inject_after_forward"});
            const long long n = grid.integer("phi2_count", 17);
            if (n < 3) fail("verify.phi2_count", "must be >= 3");
            for (long long i = 0; i < n; ++i) v.phi2.push_back(-TWO_PI + 2.0 * TWO_PI * i / static_cast<double>(n - 1));
            r.put("phi2", v.phi2);
        }
        if (v.phi2.size() < 3) fail("verify.phi2", "needs at least three phases");
        v.wait = r.number("wait_s", 4e-3);
        if (!(v.wait > 0.0)) fail("verify.wait_s", "must be > 0");
        v.inject_after_forward = r.flag("inject_after_forward", false);
        root.put("verify", r.take());
        rc.verify = v;
    }

    if (root.has("plan")) {
        Reader r(root.get("plan"), "plan",
                 {"g_hz", "kappa_hz", "delta_hz", "omega_m_hz", "q_m", "temperature_k", "cool_duration_s",
                  "blue_duration_s", "read_g_hz", "read_duration_s", "eta_d", "eta_r", "dcr_hz", "stokes_probability",
                  "rho00", "wait_s", "blue_nbar", "signal_rate_hz"});
        PlanBlock p;
        PlannerInputs& in = p.inputs;
        in.g = r.angular("g_hz", 1600.0);
        in.kappa = r.angular("kappa_hz", 2e3);
        const double wm = r.number("omega_m_hz", 1.2e6);
        in.omega_m = TWO_PI * wm;
        in.delta = r.angular("delta_hz", -wm);
        const double q = r.number("q_m", 1e9);
        in.gamma_m = q > 0.0 ? in.omega_m / q : 0.0;
        const double temp = r.number("temperature_k", 0.1);
        check("plan.temperature_k", [&] { in.n_th = bose_occupancy(in.omega_m, temp); });
        in.cool_duration = r.number("cool_duration_s", 5e-3);
        in.blue_duration = r.number("blue_duration_s", 0.1e-3);
        in.read_g = r.angular("read_g_hz", 5000.0);
        in.read_duration = r.number("read_duration_s", 0.5e-3);
        in.eta_d = r.number("eta_d", 0.075);
        in.eta_r = r.number("eta_r", 0.99);
        in.dcr = r.number("dcr_hz", 10.0);
        in.stokes_probability = r.number("stokes_probability", 0.1);
        in.rho00 = r.number("rho00", 0.0);
        p.wait = r.number("wait_s", 0.0);
        p.blue_nbar = r.number("blue_nbar", 0.2034);
        p.signal_rate = r.number("signal_rate_hz", 75.0);
        check("plan", [&] { in.validate(); });
        if (p.wait < 0.0 || p.blue_nbar < 0.0 || p.signal_rate < 0.0) fail("plan", "needs wait_s, blue_nbar, signal_rate_hz >= 0");
        root.put("plan", r.take());
        rc.plan = p;
    }

    if (root.has("adiabaticity")) {
        Reader r(root.get("adiabaticity"), "adiabaticity", {"omega0_hz", "n_o", "upper_form", "exact_omega_width"});
        AdiabaticityBlock a;
        if (r.has("omega0_hz")) a.omega0 = r.angular("omega0_hz", 0.0);
        a.n_o = r.number("n_o", 5.0);
        const std::string form = r.text("upper_form", "tabulated");
        if (form == "tabulated") a.options.upper_form = UpperBoundForm::tabulated;
        else if (form == "as_written") a.options.upper_form = UpperBoundForm::as_written;
        else fail("adiabaticity.upper_form", "must be tabulated or as_written");
        a.options.exact_omega_width = r.flag("exact_omega_width", false);
        for (const auto& s : sc.schedules) {
            const double w0 = a.omega0 ? *a.omega0 : omega0_from(sc.params.g1, s.alpha0);
            check("adiabaticity", [&] { (void)adiabaticity_bounds(s.theta, s.sigma1, s.tau, w0, a.n_o, a.options); });
        }
        root.put("adiabaticity", r.take());
        rc.adiabaticity = a;
    }

    rc.effective = root.take();
    return rc;
}

// --------------------------- Presets -----------------------------------------

namespace {

Json stirap_schedule(double sigma) { return Json{{"kind", "stirap"}, {"alpha0", 2000.0}, {"sigma_s", sigma}}; }
Json fractional_schedule(double sigma) { return Json{{"kind", "fractional"}, {"alpha0", 2000.0}, {"sigma_s", sigma}}; }

Json base_case(double temperature, Json schedule, Json initial, Json target, double t0, double t1) {
    return Json{{"system", {{"temperature_k", temperature}}},
                {"schedules", Json::array({std::move(schedule)})},
                {"initial", std::move(initial)},
                {"dims", {2, 5, 5}},
                {"picture", "rwa"},
                {"horizon", {{"t_start_s", t0}, {"t_end_s", t1}, {"samples", 201}}},
                {"target", std::move(target)}};
}

const Json WEIGHTS = Json{{"kind", "weights"}, {"weights", {0.0, 0.89, 0.10, 0.01}}};
const Json COPY = Json{{"kind", "mode2_copy"}, {"weights", {0.0, 0.89, 0.10, 0.01}}};
const Json BELL = Json{{"kind", "bell_minus"}};

Json with_eval(Json j, double t) {
    j["horizon"]["evaluation_time_s"] = t;
    return j;
}

Json fig1() {
    return base_case(0.01, stirap_schedule(0.6e-3), Json{{"kind", "superposition_01"}},
                     Json{{"kind", "minus_superposition"}}, -2e-3, 2e-3);
}
Json stirap_50mk() { return base_case(0.05, stirap_schedule(0.6e-3), WEIGHTS, COPY, -2e-3, 2e-3); }
Json stirap_1k() { return with_eval(base_case(1.0, stirap_schedule(0.15e-3), WEIGHTS, COPY, -0.5e-3, 0.5e-3), 0.5e-3); }
Json fstirap_10mk() {
    return base_case(0.01, fractional_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}}, BELL, -2e-3, 2e-3);
}
Json fstirap_50mk() { return base_case(0.05, fractional_schedule(0.6e-3), WEIGHTS, BELL, -2e-3, 2e-3); }
Json fstirap_1k() {
    return with_eval(base_case(1.0, fractional_schedule(0.15e-3), WEIGHTS, BELL, -0.5e-3, 1.0e-3), 0.5e-3);
}
Json fig2() { return with_eval(base_case(1.0, stirap_schedule(0.15e-3), WEIGHTS, COPY, -0.5e-3, 1.5e-3), 0.5e-3); }
Json fig3() {
    Json j = base_case(0.01, fractional_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}},
                       Json{{"kind", "fock"}, {"n1", 1}, {"n2", 0}}, -2e-3, 6e-3);
    j["schedules"].push_back(Json{{"kind", "reversed_fractional"}, {"alpha0", 2000.0}, {"sigma_s", 0.6e-3}, {"center_s", 4e-3}});
    j["horizon"]["samples"] = 161;
    return j;
}
Json lossless() {
    Json j = base_case(0.0, fractional_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}}, BELL, -2e-3, 2e-3);
    j["system"] = Json{{"kappa_hz", 0.0}, {"q1", 0.0}, {"q2", 0.0}, {"temperature_k", 0.0}};
    j["verify"] = Json{{"phi1", 0.0}, {"phi2_count", 17}, {"wait_s", 4e-3}, {"inject_after_forward", false}};
    return j;
}
Json verify_50mk() {
    Json j = base_case(0.05, fractional_schedule(0.6e-3), Json{{"kind", "thermal_product"}, {"nbar", 0.5}},
                       Json{{"kind", "none"}}, -2e-3, 2e-3);
    j["verify"] = Json{{"phi1", 0.0}, {"phi2_count", 9}, {"wait_s", 4e-3}, {"inject_after_forward", true}};
    return j;
}
Json sweep_kappa_alpha0() {
    Json j = base_case(0.01, stirap_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}}, Json{{"kind", "none"}}, -2e-3, 2e-3);
    j["horizon"]["samples"] = 2;
    j["sweep"] = Json{{"axes", Json::array({Json{{"parameter", "kappa_hz"}, {"start", 1e2}, {"stop", 1e5}, {"count", 41}, {"scale", "log"}},
                                            Json{{"parameter", "alpha0"}, {"start", 200.0}, {"stop", 4000.0}, {"count", 41}}})},
                      {"fields", {"n2"}},
                      {"levels", {0.80, 0.95, 0.99}}};
    return j;
}
Json sweep_delta_sigma() {
    Json j = base_case(0.01, stirap_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}}, Json{{"kind", "none"}}, -2e-3, 2e-3);
    j["dims"] = {2, 3, 3};
    j["picture"] = "beam_splitter";
    j["horizon"]["samples"] = 2;
    j["sweep"] = Json{{"axes", Json::array({Json{{"parameter", "delta_hz"}, {"start", 5e3}, {"stop", 1e5}, {"count", 21}},
                                            Json{{"parameter", "sigma_s"}, {"start", 0.2e-3}, {"stop", 1.0e-3}, {"count", 21}}})},
                      {"fields", {"n2"}},
                      {"levels", {0.80, 0.95, 0.99}},
                      {"tau_ratio", 1.43}};
    return j;
}
Json sweep_omega1_omega2() {
    Json j = base_case(0.01, stirap_schedule(0.6e-3), Json{{"kind", "fock"}, {"n", 1}}, Json{{"kind", "none"}}, -2e-3, 2e-3);
    j["horizon"]["samples"] = 2;
    j["sweep"] = Json{{"axes", Json::array({Json{{"parameter", "omega1_hz"}, {"start", 1.0e6}, {"stop", 1.6e6}, {"count", 21}},
                                            Json{{"parameter", "omega2_hz"}, {"start", 1.0e6}, {"stop", 2.2e6}, {"count", 21}}})},
                      {"fields", {"n2"}},
                      {"levels", {0.80, 0.95, 0.99}},
                      {"nonrwa_window_hz", 100e3},
                      {"nonrwa_picture", "beam_splitter"}};
    return j;
}
Json plan() { return Json{{"plan", Json::object()}}; }
Json adiabaticity_preset() {
    Json frac = fractional_schedule(0.6e-3);
    frac["center_s"] = 4e-3;
    return Json{{"schedules", Json::array({stirap_schedule(0.6e-3), frac})}, {"adiabaticity", Json{{"n_o", 5.0}}}};
}

} // namespace

std::vector<std::string> preset_names() {
    return {"fig1",
            "fig2",
            "fig3",
            "fig5",
            "table2-stirap-10mK",
            "table2-stirap-50mK",
            "table2-stirap-1K",
            "table2-fstirap-10mK",
            "table2-fstirap-50mK",
            "table2-fstirap-1K",
            "lossless",
            "verify-50mK",
            "sweep-kappa-alpha0",
            "sweep-delta-sigma",
            "sweep-omega1-omega2",
            "plan",
            "adiabaticity"};
}

Json preset_config(const std::string& name) {
    if (name == "fig1" || name == "table2-stirap-10mK") return fig1();
    if (name == "fig2") return fig2();
    if (name == "fig3") return fig3();
    if (name == "fig5" || name == "table2-fstirap-1K") return fstirap_1k();
    if (name == "table2-stirap-50mK") return stirap_50mk();
    if (name == "table2-stirap-1K") return stirap_1k();
    if (name == "table2-fstirap-10mK") return fstirap_10mk();
    if (name == "table2-fstirap-50mK") return fstirap_50mk();
    if (name == "lossless") return lossless();
    if (name == "verify-50mK") return verify_50mk();
    if (name == "sweep-kappa-alpha0") return sweep_kappa_alpha0();
    if (name == "sweep-delta-sigma") return sweep_delta_sigma();
    if (name == "sweep-omega1-omega2") return sweep_omega1_omega2();
    if (name == "plan") return plan();
    if (name == "adiabaticity") return adiabaticity_preset();
    throw Error(ErrorKind::config, "config: unknown preset '" + name + "'");
}

} // namespace omstirap
