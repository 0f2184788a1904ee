#pragma once

#include <complex>
#include <vector>

#include "piezotx/modal.hpp"

namespace piezotx {

using Complex = std::complex<double>;

enum class PortRegion { primary, secondary };

/// Single-mode electromechanical two-port: static electrode capacitances
/// plus one modal mass/stiffness/damping branch coupled to each port
/// through a force factor.
struct TwoPort {
    double Cp = 0.0;     ///< input clamped capacitance, F
    double Cs = 0.0;     ///< output clamped capacitance, F
    double m = 0.0;      ///< modal mass, kg
    double k = 0.0;      ///< modal stiffness, N/m
    double c = 0.0;      ///< modal damping, N.s/m
    double psi_p = 0.0;  ///< primary force factor, N/V (signed)
    double psi_s = 0.0;  ///< secondary force factor, N/V (signed)
    double f0 = 0.0;     ///< undamped resonance, Hz
};

/// Electrode-region force factor. Beams: e31 w z_c (phi'(x2) - phi'(x1));
/// discs: e31 z_c 2 pi [r phi'(r)] from r1 to r2. Signed. A degenerate
/// region (x1 == x2) yields 0 with a warning on stderr.
double force_factor(const ModeShape& mode, const DeviceGeometry& geom,
                    PortRegion region, const MaterialLibrary& lib);

/// Reduces mode `n` of the geometry to the lumped two-port with quality
/// factor Q: m = modal mass, k = omega^2 m, c = omega m / Q, force factors
/// per region (each with its own film), clamped-permittivity electrode
/// capacitances.
TwoPort build_two_port(const DeviceGeometry& geom, int mode_index, double Q,
                       const MaterialLibrary& lib);

/// Complex voltage gain V2/V1 into load impedance ZL:
///   G = -j w psi_p psi_s / [(k - w^2 m + j w c)(1/ZL + j w Cs) + j w psi_s^2]
/// Requires ZL != 0; use voltage_gain_open for an infinite load.
Complex voltage_gain(const TwoPort& tp, double omega, Complex ZL);

/// Open-circuit limit: G = -psi_p psi_s / [(k - w^2 m + j w c) Cs + psi_s^2].
Complex voltage_gain_open(const TwoPort& tp, double omega);

/// Input admittance at the primary port with load ZL (or open).
Complex input_admittance(const TwoPort& tp, double omega, Complex ZL);
Complex input_admittance_open(const TwoPort& tp, double omega);

/// Thevenin impedance seen at the secondary with the primary shorted:
///   Z_out = 1 / [j w Cs + j w psi_s^2 / (k - w^2 m + j w c)]
Complex output_impedance(const TwoPort& tp, double omega);

/// Gain at a resistive load; RL = +inf selects the open-circuit form.
Complex gain_at(const TwoPort& tp, double omega, double RL);

struct GainCurve {
    std::vector<double> freq_hz;
    std::vector<Complex> gain;
    double load_ohm = 0.0;  ///< +inf for open circuit
};

/// Pointwise gain over [f_lo, f_hi], log-spaced by default.
GainCurve frequency_sweep(const TwoPort& tp, double f_lo, double f_hi, int points,
                          double RL, bool log_spacing = true);

struct PeakGain {
    double f_peak_hz = 0.0;
    double gain_mag = 0.0;
};

/// Coarse scan plus golden-section refinement of the gain maximum in
/// [f_lo, f_hi]; f_peak to 1e-6 relative. Throws NumericalError when the
/// maximum sits at a bracket edge (flat response).
PeakGain find_peak_gain(const TwoPort& tp, double f_lo, double f_hi, double RL);

}  // namespace piezotx
