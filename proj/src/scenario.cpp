#include "piezotx/scenario.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "piezotx/constants.hpp"
#include "piezotx/csv.hpp"
#include "piezotx/errors.hpp"
#include "piezotx/twoport.hpp"

namespace piezotx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw ConfigError("write failed: " + path.string());
}

double phase_deg(const Complex& g) {
    double deg = std::arg(g) * 180.0 / kPi;
    if (deg <= -180.0) deg += 360.0;
    return deg;
}

std::vector<std::vector<double>> gain_rows(const GainCurve& curve) {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.freq_hz.size());
    for (std::size_t i = 0; i < curve.freq_hz.size(); ++i)
        rows.push_back({curve.freq_hz[i], std::abs(curve.gain[i]),
                        phase_deg(curve.gain[i]), curve.load_ohm});
    return rows;
}

json twoport_json(const TwoPort& tp) {
    return json{{"cp_f", tp.Cp},       {"cs_f", tp.Cs},     {"m_kg", tp.m},
                {"k_n_per_m", tp.k},   {"c_ns_per_m", tp.c}, {"psi_p_n_per_v", tp.psi_p},
                {"psi_s_n_per_v", tp.psi_s}, {"f0_hz", tp.f0}};
}

json metrics_json(const PumpMetrics& m) {
    return json{{"vdc_v", m.vdc},
                {"ripple_v", m.ripple},
                {"startup_time_s", m.startup_time},
                {"pin_transient_avg_w", m.pin_transient_avg},
                {"pin_steady_w", m.pin_steady},
                {"iin_steady_rms_a", m.iin_steady_rms}};
}

std::vector<std::vector<double>> waveform_rows(const Waveforms& w) {
    std::vector<std::vector<double>> rows;
    rows.reserve(w.time.size());
    for (std::size_t i = 0; i < w.time.size(); ++i)
        rows.push_back({w.time[i], w.v_out[i], w.v_src[i], w.i_src[i]});
    return rows;
}

struct SweepRange {
    double lo, hi;
};

SweepRange sweep_range(const Scenario& s, const TwoPort& tp) {
    return {s.sweep.f_lo_hz.value_or(0.5 * tp.f0),
            s.sweep.f_hi_hz.value_or(2.0 * tp.f0)};
}

TransientOptions transient_options(const PumpSpec& p) {
    TransientOptions opts;
    opts.dt = p.dt;
    opts.t_end = p.t_end;
    opts.steady_tol = p.steady_tol;
    opts.max_steps = p.max_steps;
    opts.store_all_nodes = p.store_all_nodes;
    return opts;
}

void emit_pump_outputs(const fs::path& dir, const Circuit& circuit,
                       const Waveforms& w, double f_source, RunReport& report) {
    emit_csv(dir / "waveforms.csv", "t_s,v_out,v_src,i_src", waveform_rows(w));
    report.files.push_back("waveforms.csv");

    if (!w.nodes.empty()) {
        std::string header = "t_s";
        for (int n = 1; n < circuit.node_count; ++n)
            header += ",v_" + circuit.node_names[n];
        std::vector<std::vector<double>> rows;
        rows.reserve(w.nodes.size());
        for (std::size_t i = 0; i < w.nodes.size(); ++i) {
            std::vector<double> row;
            row.reserve(1 + w.nodes[i].size());
            row.push_back(w.time[i]);
            row.insert(row.end(), w.nodes[i].begin(), w.nodes[i].end());
            rows.push_back(std::move(row));
        }
        emit_csv(dir / "nodes.csv", header, rows);
        report.files.push_back("nodes.csv");
    }

    const PumpMetrics metrics = steady_state_metrics(w, f_source);
    write_json(dir / "metrics.json", metrics_json(metrics));
    report.files.push_back("metrics.json");
    report.headline["vdc_v"] = metrics.vdc;
    report.headline["pin_steady_w"] = metrics.pin_steady;
}

void run_modes(const Scenario& s, const fs::path& dir, RunReport& report) {
    std::vector<std::vector<double>> rows;
    for (int n = 1; n <= s.mode_count; ++n) {
        const ModeShape mode = device_mode(*s.geometry, n, s.materials);
        rows.push_back({static_cast<double>(n), mode.eigenvalue(),
                        mode.frequency_hz()});
    }
    emit_csv(dir / "modes.csv", "mode_index,eigenvalue,freq_hz", rows);
    report.files.push_back("modes.csv");
    const int idx = std::min(s.mode_index, s.mode_count);
    report.headline["f_hz"] = rows[idx - 1][2];
}

void run_sweep(const Scenario& s, const fs::path& dir, RunReport& report) {
    if (s.film_sets.empty()) {
        const TwoPort tp = build_two_port(*s.geometry, s.mode_index, s.q_factor,
                                          s.materials);
        const SweepRange r = sweep_range(s, tp);
        const GainCurve curve = frequency_sweep(tp, r.lo, r.hi, s.sweep.points,
                                                s.load_ohm, s.sweep.log_spacing);
        emit_csv(dir / "gain.csv", "freq_hz,gain_mag,gain_phase_deg,load_ohm",
                 gain_rows(curve));
        report.files.push_back("gain.csv");
        const PeakGain peak = find_peak_gain(tp, r.lo, r.hi, s.load_ohm);
        report.headline["f_peak_hz"] = peak.f_peak_hz;
        report.headline["gain_peak"] = peak.gain_mag;
        return;
    }

    // Comparison sweep: same geometry with two film pairings; the report
    // carries the peak-gain ratio of the second set over the first.
    json cmp = json::array();
    std::vector<double> peaks;
    for (const FilmSet& set : s.film_sets) {
        const DeviceGeometry geom = with_films(*s.geometry, set);
        const TwoPort tp = build_two_port(geom, s.mode_index, s.q_factor,
                                          s.materials);
        const SweepRange r = sweep_range(s, tp);
        const GainCurve curve = frequency_sweep(tp, r.lo, r.hi, s.sweep.points,
                                                s.load_ohm, s.sweep.log_spacing);
        const std::string name = "gain_" + set.primary + "_" + set.secondary + ".csv";
        emit_csv(dir / name, "freq_hz,gain_mag,gain_phase_deg,load_ohm",
                 gain_rows(curve));
        report.files.push_back(name);
        const PeakGain peak = find_peak_gain(tp, r.lo, r.hi, s.load_ohm);
        peaks.push_back(peak.gain_mag);
        cmp.push_back(json{{"primary", set.primary},
                           {"secondary", set.secondary},
                           {"f_peak_hz", peak.f_peak_hz},
                           {"gain_peak", peak.gain_mag},
                           {"file", name}});
    }
    const double ratio = peaks[1] / peaks[0];
    write_json(dir / "comparison.json", json{{"sets", cmp}, {"gain_ratio", ratio}});
    report.files.push_back("comparison.json");
    report.headline["gain_ratio"] = ratio;
    report.headline["gain_peak"] = peaks[1];
}

void run_pump(const Scenario& s, const fs::path& dir, RunReport& report) {
    const PumpSpec& p = s.pump;
    const Circuit circuit = build_ladder(p.levels, p.c_stage, p.c_load, p.r_load,
                                         p.diode, *p.source);
    const Waveforms w = transient(circuit, transient_options(p));
    emit_pump_outputs(dir, circuit, w, p.source->frequency, report);
}

void run_chain(const Scenario& s, const fs::path& dir, RunReport& report) {
    const TwoPort tp = build_two_port(*s.geometry, s.mode_index, s.q_factor,
                                      s.materials);
    const double omega = 2.0 * kPi * s.drive.frequency;
    const double vth = std::abs(voltage_gain_open(tp, omega)) * s.drive.amplitude;
    const double zout = std::abs(output_impedance(tp, omega));

    write_json(dir / "chain_twoport.json",
               json{{"two_port", twoport_json(tp)},
                    {"f_source_hz", s.drive.frequency},
                    {"drive_amplitude_v", s.drive.amplitude},
                    {"vth_v", vth},
                    {"zout_ohm", zout}});
    report.files.push_back("chain_twoport.json");
    report.headline["vth_v"] = vth;
    report.headline["zout_ohm"] = zout;

    const PumpSpec& p = s.pump;
    const SineSource source{vth, s.drive.frequency, zout};
    const Circuit circuit =
        build_ladder(p.levels, p.c_stage, p.c_load, p.r_load, p.diode, source);
    const Waveforms w = transient(circuit, transient_options(p));
    emit_pump_outputs(dir, circuit, w, s.drive.frequency, report);
}

}  // namespace

RunReport run_scenario(const Scenario& s) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.kind = s.kind;

    fs::path dir(s.out_dir.empty() ? "." : s.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir.string());

    switch (s.kind) {
        case ScenarioKind::modes: run_modes(s, dir, report); break;
        case ScenarioKind::sweep: run_sweep(s, dir, report); break;
        case ScenarioKind::pump: run_pump(s, dir, report); break;
        case ScenarioKind::chain: run_chain(s, dir, report); break;
    }

    json rep{{"kind", to_string(s.kind)},
             {"files", report.files},
             {"headline", report.headline}};
    write_json(dir / "report.json", rep);
    report.files.push_back("report.json");

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace piezotx
