// config.hpp: run configuration: JSON parsing with unit suffixes, defaults, presets
//
// Frequencies in a config are given as value / 2pi with an _hz suffix, times
// carry _s and temperatures _k. Count rates (dcr_hz, signal_rate_hz) stay in Hz.
// Every other unit conversion in the engine works on rad/s and seconds.

#pragma once

#include "omstirap/adiabatic.hpp"
#include "omstirap/protocols.hpp"
#include "omstirap/sweep.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace omstirap {

using Json = nlohmann::ordered_json;

inline constexpr const char* ENGINE_VERSION = "0.1.0";

struct SweepBlock {
    std::vector<SweepAxis> axes;             // engine units
    std::vector<std::string> axis_columns;   // config names (e.g. kappa_hz)
    std::vector<std::vector<double>> axis_values;   // config units
    std::vector<std::string> fields{"n2"};
    std::vector<double> levels;
    SweepOptions options;
    bool spot_check = false;
};

struct VerifyBlock {
    double phi1 = 0.0;
    std::vector<double> phi2;
    double wait = 4e-3;
    bool inject_after_forward = false;
};

struct PlanBlock {
    PlannerInputs inputs;
    double wait = 0.0;   // visibility is reported at this hold time
    double blue_nbar = 0.0;
    double signal_rate = 0.0;   // Hz
};

// Bounds are evaluated for every schedule of the scenario (theta, sigma1, tau,
// Omega_0 = 2 g1 alpha0 unless omega0 is given).
struct AdiabaticityBlock {
    std::optional<double> omega0;   // rad/s
    double n_o = 5.0;
    AdiabaticityOptions options;
};

struct RunConfig {
    Scenario scenario;
    std::optional<SweepBlock> sweep;
    std::optional<VerifyBlock> verify;
    std::optional<PlanBlock> plan;
    std::optional<AdiabaticityBlock> adiabaticity;
    std::size_t workers = 1;

    // The input with every default filled in. Parsing it again gives the same
    // RunConfig and the same effective JSON.
    Json effective;
};

// Unknown keys, malformed unit suffixes, wrong types and invariant violations
// raise Error(ErrorKind::config) naming the offending key.
RunConfig parse_config(const Json& input);

// Objects merge key by key; anything else in `overlay` replaces `base`.
Json merge_config(const Json& base, const Json& overlay);

std::vector<std::string> preset_names();
Json preset_config(const std::string& name);

} // namespace omstirap
