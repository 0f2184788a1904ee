#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace piezotx {

/// Shockley-style diode with the exponent clamped (linear extrapolation
/// past V/(n VT) = 80) for overflow safety.
struct ExponentialDiode {
    double Is = 1e-9;     ///< saturation current, A
    double n = 1.2;       ///< ideality factor
    double VT = 0.02585;  ///< thermal voltage, V
};

/// Piecewise-linear switch: (V - Vdrop)/Ron above the drop, Goff*V below.
struct IdealSwitchDiode {
    double Ron = 1.0;    ///< on resistance, Ohm
    double Goff = 0.0;   ///< off conductance, S
    double Vdrop = 0.0;  ///< forward drop, V
};

using DiodeModel = std::variant<ExponentialDiode, IdealSwitchDiode>;

void validate(const DiodeModel& dm);

struct DiodeEval {
    double current = 0.0;      ///< A
    double conductance = 0.0;  ///< dI/dV, S
};

DiodeEval diode_current(const DiodeModel& dm, double v);

/// Sinusoidal EMF amplitude*sin(2 pi f t) behind a series resistance.
struct SineSource {
    double amplitude = 0.0;  ///< V
    double frequency = 0.0;  ///< Hz
    double rs = 1e3;         ///< Ohm
};

/// Node 0 is ground. The source EMF is not a circuit node; it feeds
/// `source_node` through its series resistance.
struct Circuit {
    struct Capacitor {
        int np = 0, nn = 0;
        double farad = 0.0;
    };
    struct Resistor {
        int np = 0, nn = 0;
        double ohm = 0.0;
    };
    struct Diode {
        int anode = 0, cathode = 0;
        DiodeModel model;
    };

    int node_count = 1;  ///< including ground
    std::vector<Capacitor> capacitors;
    std::vector<Resistor> resistors;
    std::vector<Diode> diodes;
    SineSource source;
    int source_node = 1;
    int output_node = 1;
    std::vector<std::string> node_names;  ///< size node_count; [0] = "gnd"
};

/// Throws std::invalid_argument on out-of-range element nodes or when some
/// node is unreachable from ground through the element graph.
void validate_circuit(const Circuit& c);

/// N-level Schenkel (Cockcroft-Walton) ladder: an AC column of N series
/// capacitors fed from the source terminal, a DC column of N series
/// capacitors from ground, 2N diodes zig-zagging between the columns, the
/// output at the top of the DC column with C_load (and R_load when given).
/// Node ordering keeps the nodal matrix banded.
Circuit build_ladder(int levels, double c_stage, double c_load,
                     std::optional<double> r_load, const DiodeModel& dm,
                     const SineSource& source);

struct TransientOptions {
    double dt = 0.0;  ///< s; 0 selects the default 1/(500 f_source)
    /// Fixed end time. When absent the run stops on the steadiness
    /// criterion below (or at max_steps).
    std::optional<double> t_end;
    double steady_tol = 1e-6;     ///< relative period-mean tolerance
    int steady_periods = 5;       ///< consecutive periods under tolerance
    std::size_t max_steps = 1'000'000;  ///< cap for until-steady runs
    bool store_all_nodes = false;
};

/// Running energy totals (trapezoid-accumulated branch powers) plus the
/// capacitor stored energy at the endpoints. In a consistent run
/// source = rs + diodes + resistors + (cap_final - cap_initial) up to
/// discretization error.
struct EnergyLedger {
    double source = 0.0;
    double rs = 0.0;
    double diodes = 0.0;
    double resistors = 0.0;
    double cap_initial = 0.0;
    double cap_final = 0.0;
};

struct Waveforms {
    double dt = 0.0;
    double f_source = 0.0;
    std::vector<double> time;
    std::vector<double> v_out;
    std::vector<double> v_src;  ///< source terminal voltage (after rs)
    std::vector<double> i_src;  ///< current from the EMF into the circuit
    /// Per-step node voltages (unknown nodes 1..node_count-1); populated
    /// only when TransientOptions::store_all_nodes is set.
    std::vector<std::vector<double>> nodes;
    std::vector<double> final_state;  ///< last node-voltage vector
    EnergyLedger energy;
    bool reached_steady = false;
};

/// Fixed-step trapezoidal nodal transient with Newton-Raphson per step
/// (1 uV absolute + 1e-6 relative update tolerance, 100 iterations,
/// time-step-halving fallback). Deterministic: identical inputs produce
/// bit-identical waveforms.
Waveforms transient(const Circuit& c, const TransientOptions& opts = {});

/// No-load zero-ripple Cockcroft-Walton limit, 2 N (Vpeak - Vdrop).
double ideal_cw_voltage(int levels, double vpeak, double vdrop);

struct PumpMetrics {
    double vdc = 0.0;               ///< last-period mean of the output, V
    double ripple = 0.0;            ///< last-period peak-to-peak, V
    double startup_time = 0.0;      ///< time to 95% of final vdc, s
    double pin_transient_avg = 0.0; ///< mean source power over startup, W
    double pin_steady = 0.0;        ///< last-period mean source power, W
    double iin_steady_rms = 0.0;    ///< last-period source current RMS, A
};

/// Requires waveforms spanning at least 10 source periods.
PumpMetrics steady_state_metrics(const Waveforms& w, double f_source);

}  // namespace piezotx
