#pragma once

#include <optional>
#include <string>
#include <vector>

#include "piezotx/modal.hpp"
#include "piezotx/pump.hpp"

namespace piezotx {

enum class ScenarioKind { modes, sweep, pump, chain };

const char* to_string(ScenarioKind kind);

struct SweepSpec {
    std::optional<double> f_lo_hz;  ///< default: f0/2 of the selected mode
    std::optional<double> f_hi_hz;  ///< default: 2*f0
    int points = 2001;
    bool log_spacing = true;
};

/// A primary/secondary film pairing for comparison sweeps.
struct FilmSet {
    std::string primary;
    std::string secondary;
};

struct PumpSpec {
    int levels = 30;
    double c_stage = 100e-12;  ///< F
    double c_load = 1e-9;      ///< F
    std::optional<double> r_load;  ///< Ohm; absent = open output
    DiodeModel diode = ExponentialDiode{};
    std::optional<SineSource> source;  ///< required for kind = pump
    double dt = 0.0;                   ///< s; 0 = 1/(500 f)
    std::optional<double> t_end;       ///< s; absent = run until steady
    double steady_tol = 1e-6;
    std::size_t max_steps = 1'000'000;
    bool store_all_nodes = false;
};

/// Drive applied to the two-port primary in chain scenarios.
struct DriveSpec {
    double amplitude = 0.05;   ///< V
    double frequency = 150e3;  ///< Hz
};

/// Fully-resolved scenario: validated inputs with defaults applied.
struct Scenario {
    ScenarioKind kind = ScenarioKind::modes;
    MaterialLibrary materials;
    std::optional<DeviceGeometry> geometry;
    int mode_index = 1;
    int mode_count = 5;      ///< modes scenario: table length
    double q_factor = 200.0;
    double load_ohm = 1e7;   ///< +inf = open circuit
    SweepSpec sweep;
    std::vector<FilmSet> film_sets;  ///< empty, or exactly two for comparisons
    PumpSpec pump;
    DriveSpec drive;
    std::string out_dir = ".";
};

/// Parses and validates a scenario from JSON text. Strict: unknown keys are
/// rejected with their path; constraint violations name the field. Throws
/// ConfigError.
Scenario parse_config(const std::string& json_text);

/// Applies a dotted-path override of the form "a.b.c=value" to raw JSON
/// text and returns the modified text. The value is parsed as JSON when
/// possible, otherwise taken as a string.
std::string apply_override(const std::string& json_text,
                           const std::string& assignment);

/// Returns the geometry with the piezo films of both regions replaced by
/// the named materials.
DeviceGeometry with_films(const DeviceGeometry& geom, const FilmSet& films);

}  // namespace piezotx
