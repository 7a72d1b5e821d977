// omstirap_cli: simulate | sweep | adiabaticity | verify | plan
//
// Exit codes: 0 success, 2 config or usage error, 3 integration failure,
// 4 any other runtime error.

#include "omstirap/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

using namespace omstirap;
namespace fs = std::filesystem;

namespace {

struct Args {
    std::string config_path, out_dir = "out", preset, picture;
    std::optional<std::size_t> workers;
};

// NaN and infinities become null so every emitted number is finite.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void write_json(const fs::path& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << j.dump(2) << '\n';
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f.imbue(std::locale::classic());
    f.precision(std::numeric_limits<double>::max_digits10);
    return f;
}

void csv_value(std::ostream& out, double v) {
    if (std::isfinite(v)) out << v;
    else out << "nan";
}

Json load_input(const Args& a) {
    Json j = a.preset.empty() ? Json::object() : preset_config(a.preset);
    if (!a.config_path.empty()) {
        std::ifstream f(a.config_path);
        if (!f) throw Error(ErrorKind::config, "config: cannot open " + a.config_path);
        Json file;
        try {
            file = Json::parse(f);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorKind::config, std::string("config: ") + a.config_path + ": " + e.what());
        }
        j = merge_config(j, file);
    }
    if (!a.picture.empty()) j["picture"] = a.picture;
    if (a.workers) j["workers"] = *a.workers;
    return j;
}

Json summary_json(const ScenarioResult& r, const RunConfig& rc) {
    const auto& s = r.summary;
    return Json{{"engine_version", ENGINE_VERSION},
                {"evaluation_time_s", s.evaluation_time},
                {"final_fidelity", num(s.final_fidelity)},
                {"peak_negativity", s.peak_negativity},
                {"peak_negativity_time_s", s.peak_negativity_time},
                {"final_n1", s.final_n1},
                {"final_n2", s.final_n2},
                {"final_nc", s.final_nc},
                {"accepted_steps", s.accepted_steps},
                {"rejected_steps", s.rejected_steps},
                {"wall_seconds", s.wall_seconds},
                {"parameters", Json{{"system", rc.effective["system"]},
                                    {"schedules", rc.effective["schedules"]},
                                    {"dims", rc.effective["dims"]},
                                    {"picture", rc.effective["picture"]}}}};
}

void cmd_simulate(const RunConfig& rc, const fs::path& out) {
    const ScenarioResult r = run_scenario(rc.scenario);
    const auto& obs = r.trajectory.observables;
    auto column = [&](const char* name, std::size_t i) {
        const auto it = obs.find(name);
        return it == obs.end() ? std::numeric_limits<double>::quiet_NaN() : it->second[i];
    };
    auto f = open_csv(out / "trajectory.csv");
    f << "t_s,n1,n2,nc,negativity,fidelity,alpha1,alpha2\n";
    for (std::size_t i = 0; i < r.trajectory.times.size(); ++i) {
        f << r.trajectory.times[i];
        for (const char* name : {"n1", "n2", "nc", "negativity"}) {
            f << ',';
            csv_value(f, column(name, i));
        }
        // Empty field when the scenario has no fidelity target.
        f << ',';
        if (rc.scenario.target) csv_value(f, column("fidelity", i));
        for (const char* name : {"alpha1", "alpha2"}) {
            f << ',';
            csv_value(f, column(name, i));
        }
        f << '\n';
    }
    write_json(out / "summary.json", summary_json(r, rc));
    std::cout << "final fidelity " << r.summary.final_fidelity << ", peak negativity " << r.summary.peak_negativity
              << '\n';
}

void cmd_sweep(const RunConfig& rc, const fs::path& out) {
    if (!rc.sweep) throw Error(ErrorKind::config, "config: 'sweep' block is required by the sweep command");
    const SweepBlock& b = *rc.sweep;
    SweepOptions opt = b.options;
    opt.workers = rc.workers;
    const SweepResult res = run_sweep(rc.scenario, b.axes, b.fields, opt);

    // Same grid with axis coordinates in config units, for the CSV and the contours.
    SweepResult shown = res;
    for (std::size_t k = 0; k < shown.axes.size(); ++k) shown.axes[k].values = b.axis_values[k];

    auto f = open_csv(out / "sweep.csv");
    for (const auto& c : b.axis_columns) f << c << ',';
    for (std::size_t k = 0; k < b.fields.size(); ++k) f << b.fields[k] << (k + 1 < b.fields.size() ? "," : "\n");
    for (std::size_t cell = 0; cell < shown.cell_count(); ++cell) {
        for (double x : shown.coordinates(cell)) f << x << ',';
        for (std::size_t k = 0; k < b.fields.size(); ++k) {
            csv_value(f, res.fields.at(b.fields[k])[cell]);
            f << (k + 1 < b.fields.size() ? "," : "\n");
        }
    }

    Json axes = Json::array();
    for (std::size_t k = 0; k < b.axes.size(); ++k) {
        axes.push_back(Json{{"parameter", b.axis_columns[k]},
                            {"scale", to_string(b.axes[k].scale)},
                            {"values", b.axis_values[k]}});
    }
    Json failures = Json::array();
    for (const auto& e : res.failures) {
        failures.push_back(Json{{"cell", e.cell}, {"kind", std::string(to_string(e.kind))}, {"message", e.message}});
    }
    Json contours = Json::object();
    if (shown.axes.size() == 2) {
        for (const auto& field : b.fields) {
            Json lines = Json::array();
            for (const auto& line : extract_contours(shown, field, b.levels)) {
                Json pts = Json::array();
                for (const auto& p : line.points) pts.push_back({p[0], p[1]});
                lines.push_back(Json{{"level", line.level}, {"closed", line.closed}, {"points", pts}});
            }
            contours[field] = lines;
        }
    }
    Json j{{"engine_version", ENGINE_VERSION}, {"axes", axes}, {"fields", b.fields}, {"levels", b.levels},
           {"dims", res.dims},  {"failures", failures}, {"contours", contours}};
    if (b.spot_check) {
        const SpotCheck sc = convergence_spot_check(rc.scenario, res, b.fields.front(), opt);
        j["spot_check"] = Json{{"field", b.fields.front()},
                               {"cells", sc.cells},
                               {"reference", sc.reference},
                               {"max_relative_difference", sc.max_relative_difference}};
    }
    j["config"] = rc.effective;
    write_json(out / "sweep.json", j);
    std::cout << res.cell_count() << " cells, " << res.failures.size() << " failed\n";
}

void cmd_adiabaticity(const RunConfig& rc, const fs::path& out) {
    if (!rc.adiabaticity) {
        throw Error(ErrorKind::config, "config: 'adiabaticity' block is required by the adiabaticity command");
    }
    const AdiabaticityBlock& a = *rc.adiabaticity;
    Json cases = Json::array();
    for (const auto& s : rc.scenario.schedules) {
        const double w0 = a.omega0 ? *a.omega0 : omega0_from(rc.scenario.params.g1, s.alpha0);
        const AdiabaticityReport r = adiabaticity_bounds(s.theta, s.sigma1, s.tau, w0, a.n_o, a.options);
        const TransferTimeWindow w = transfer_time_window(rc.scenario.params, s);
        cases.push_back(Json{{"kind", to_string(s.kind)},
                             {"theta", s.theta},
                             {"sigma_s", s.sigma1},
                             {"tau_s", s.tau},
                             {"omega0_hz", w0 / TWO_PI},
                             {"theta_dot_max_per_s", r.theta_dot_max},
                             {"t_theta_width_s", r.t_theta_width},
                             {"t_omega_width_s", r.t_omega_width},
                             {"two_tau_over_sigma", {r.lower_bound, r.upper_bound}},
                             {"tau_over_sigma", {r.tau_over_sigma_lower(), r.tau_over_sigma_upper()}},
                             {"satisfied", r.satisfied},
                             {"transfer_time_window_s",
                              Json{{"lower", num(w.lower)},
                                   {"upper", num(w.upper)},
                                   {"tau_geometric", num(w.tau_geometric)},
                                   {"ratio", num(w.ratio)}}}});
        std::cout << to_string(s.kind) << ": " << r.tau_over_sigma_lower() << " <~ tau/sigma <~ "
                  << r.tau_over_sigma_upper() << '\n';
    }
    write_json(out / "adiabaticity.json", Json{{"engine_version", ENGINE_VERSION}, {"cases", cases}});
}

Json fit_json(const FringeFit& f) {
    return Json{{"amplitude", f.amplitude}, {"visibility", f.visibility}, {"phase", f.phase}};
}

void cmd_verify(const RunConfig& rc, const fs::path& out) {
    if (!rc.verify) throw Error(ErrorKind::config, "config: 'verify' block is required by the verify command");
    const VerifyBlock& v = *rc.verify;
    InterferometryOptions opt;
    opt.inject_after_forward = v.inject_after_forward;
    opt.workers = rc.workers;
    const InterferometryResult r = run_interferometry(rc.scenario, v.phi2, v.phi1, v.wait, opt);
    auto f = open_csv(out / "fringe.csv");
    f << "phi2,n1,p1\n";
    for (const auto& p : r.points) f << p.phi2 << ',' << p.n1 << ',' << p.p1 << '\n';
    write_json(out / "verify.json", Json{{"engine_version", ENGINE_VERSION},
                                         {"phi1", v.phi1},
                                         {"wait_s", v.wait},
                                         {"inject_after_forward", v.inject_after_forward},
                                         {"fit_n1", fit_json(r.fit_n1)},
                                         {"fit_p1", fit_json(r.fit_p1)}});
    std::cout << "visibility " << r.fit_n1.visibility << ", amplitude " << r.fit_n1.amplitude << '\n';
}

void cmd_plan(const RunConfig& rc, const fs::path& out) {
    if (!rc.plan) throw Error(ErrorKind::config, "config: 'plan' block is required by the plan command");
    const PlanBlock& p = *rc.plan;
    const CoolingResult c = cooling_steady_state(p.inputs);
    const DetectionBudget d = detection_budget(p.inputs);
    const double v = visibility_model(p.inputs, p.wait);
    Json weights = Json::array();
    if (p.signal_rate + p.inputs.dcr > 0.0) {
        const DensityMatrix h = heralded_initial_state(thermal_state(12, p.blue_nbar), p.signal_rate, p.inputs.dcr);
        for (Eigen::Index n = 0; n < 4; ++n) weights.push_back(h.matrix()(n, n).real());
    }
    write_json(out / "plan.json", Json{{"engine_version", ENGINE_VERSION},
                                       {"gamma_opt_per_s", num(c.gamma_opt)},
                                       {"n_min", num(c.n_min)},
                                       {"n_final", num(c.n_final)},
                                       {"herald_time_s", num(d.herald_time)},
                                       {"final_probability", num(d.final_probability)},
                                       {"readout_time_s", num(d.readout_time)},
                                       {"readout_success", num(d.readout_success)},
                                       {"visibility", num(v)},
                                       {"wait_s", p.wait},
                                       {"heralded_weights", weights}});
    std::cout << "n_final " << c.n_final << ", T_h " << d.herald_time << " s, V " << v << '\n';
}

int run(const std::string& command, const Args& a) {
    const RunConfig rc = parse_config(load_input(a));
    const fs::path out(a.out_dir);
    fs::create_directories(out);
    write_json(out / "config.json", rc.effective);
    if (command == "simulate") cmd_simulate(rc, out);
    else if (command == "sweep") cmd_sweep(rc, out);
    else if (command == "adiabaticity") cmd_adiabaticity(rc, out);
    else if (command == "verify") cmd_verify(rc, out);
    else cmd_plan(rc, out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical STIRAP / fractional-STIRAP engine"};
    app.require_subcommand(1);
    Args args;
    std::string presets;
    for (const auto& n : preset_names()) presets += (presets.empty() ? "" : ", ") + n;
    for (const char* name : {"simulate", "sweep", "adiabaticity", "verify", "plan"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", args.config_path, "JSON config file");
        sub->add_option("--out", args.out_dir, "output directory")->capture_default_str();
        sub->add_option("--preset", args.preset, "named preset: " + presets);
        sub->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--picture", args.picture, "rwa, full or beam_splitter");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, args);
    } catch (const IntegrationError& e) {
        std::cerr << "integration failed: " << e.what() << " (last good time " << e.last_good_time() << " s)\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == ErrorKind::config ? 2 : 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
