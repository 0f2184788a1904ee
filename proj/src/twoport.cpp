#include "piezotx/twoport.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "piezotx/constants.hpp"
#include "piezotx/errors.hpp"

namespace piezotx {

namespace {

constexpr Complex kJ{0.0, 1.0};

// Mechanical branch impedance numerator k - w^2 m + j w c.
Complex mech(const TwoPort& tp, double omega) {
    return Complex(tp.k - omega * omega * tp.m, omega * tp.c);
}

Complex gain_with_load_admittance(const TwoPort& tp, double omega, Complex YL) {
    const Complex y2 = YL + kJ * (omega * tp.Cs);
    return -kJ * omega * tp.psi_p * tp.psi_s /
           (mech(tp, omega) * y2 + kJ * (omega * tp.psi_s * tp.psi_s));
}

Complex admittance_with_load(const TwoPort& tp, double omega, Complex YL) {
    const Complex y2 = YL + kJ * (omega * tp.Cs);
    return kJ * (omega * tp.Cp) +
           kJ * omega * tp.psi_p * tp.psi_p * y2 /
               (mech(tp, omega) * y2 + kJ * (omega * tp.psi_s * tp.psi_s));
}

}  // namespace

double force_factor(const ModeShape& mode, const DeviceGeometry& geom,
                    PortRegion region, const MaterialLibrary& lib) {
    const bool primary = region == PortRegion::primary;
    const ElectrodeRegion& r = primary ? geom.primary : geom.secondary;
    const LayerStack& stack = primary ? geom.primary_stack : geom.secondary_stack;
    const LayerRole role =
        primary ? LayerRole::piezo_primary : LayerRole::piezo_secondary;

    if (r.begin == r.end) {
        std::cerr << "[piezotx] warning: degenerate "
                  << (primary ? "primary" : "secondary")
                  << " electrode region, force factor is 0\n";
        return 0.0;
    }

    const Layer& film = find_layer(stack, role);
    const double e31 = effective_e31(lib.piezo_at(film.material));
    const double zc = coupling_arm(stack, role, lib);

    if (is_disc(geom.kind)) {
        const double lever =
            r.end * mode.slope(r.end) - r.begin * mode.slope(r.begin);
        return e31 * zc * 2.0 * kPi * lever;
    }
    return e31 * geom.width * zc * (mode.slope(r.end) - mode.slope(r.begin));
}

TwoPort build_two_port(const DeviceGeometry& geom, int mode_index, double Q,
                       const MaterialLibrary& lib) {
    if (Q <= 0.0) throw std::invalid_argument("quality factor must be > 0");
    validate_geometry(geom, lib);

    const ModeShape mode = device_mode(geom, mode_index, lib);

    TwoPort tp;
    tp.m = modal_mass(mode, geom, lib);
    tp.k = mode.omega() * mode.omega() * tp.m;
    tp.c = mode.omega() * tp.m / Q;
    tp.f0 = mode.frequency_hz();
    tp.psi_p = force_factor(mode, geom, PortRegion::primary, lib);
    tp.psi_s = force_factor(mode, geom, PortRegion::secondary, lib);

    auto electrode_cap = [&](const ElectrodeRegion& r, const LayerStack& stack,
                             LayerRole role) {
        const Layer& film = find_layer(stack, role);
        const double eps = clamped_permittivity(lib.piezo_at(film.material));
        const double area = is_disc(geom.kind)
                                ? kPi * (r.end * r.end - r.begin * r.begin)
                                : geom.width * (r.end - r.begin);
        return eps * area / film.thickness;
    };
    tp.Cp = electrode_cap(geom.primary, geom.primary_stack,
                          LayerRole::piezo_primary);
    tp.Cs = electrode_cap(geom.secondary, geom.secondary_stack,
                          LayerRole::piezo_secondary);
    return tp;
}

Complex voltage_gain(const TwoPort& tp, double omega, Complex ZL) {
    if (ZL == Complex(0.0, 0.0))
        throw std::invalid_argument("voltage_gain: ZL must be nonzero");
    return gain_with_load_admittance(tp, omega, 1.0 / ZL);
}

Complex voltage_gain_open(const TwoPort& tp, double omega) {
    return -tp.psi_p * tp.psi_s /
           (mech(tp, omega) * tp.Cs + tp.psi_s * tp.psi_s);
}

Complex input_admittance(const TwoPort& tp, double omega, Complex ZL) {
    if (ZL == Complex(0.0, 0.0))
        throw std::invalid_argument("input_admittance: ZL must be nonzero");
    return admittance_with_load(tp, omega, 1.0 / ZL);
}

Complex input_admittance_open(const TwoPort& tp, double omega) {
    return admittance_with_load(tp, omega, Complex(0.0, 0.0));
}

Complex output_impedance(const TwoPort& tp, double omega) {
    if (omega <= 0.0) throw std::invalid_argument("output_impedance: omega must be > 0");
    const Complex y = kJ * (omega * tp.Cs) +
                      kJ * omega * tp.psi_s * tp.psi_s / mech(tp, omega);
    return 1.0 / y;
}

Complex gain_at(const TwoPort& tp, double omega, double RL) {
    if (std::isinf(RL)) return voltage_gain_open(tp, omega);
    return voltage_gain(tp, omega, Complex(RL, 0.0));
}

GainCurve frequency_sweep(const TwoPort& tp, double f_lo, double f_hi, int points,
                          double RL, bool log_spacing) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo))
        throw std::invalid_argument("frequency_sweep: need 0 < f_lo < f_hi");
    if (points < 2) throw std::invalid_argument("frequency_sweep: points >= 2");
    GainCurve curve;
    curve.load_ohm = RL;
    curve.freq_hz.reserve(points);
    curve.gain.reserve(points);
    const double la = std::log(f_lo);
    const double lb = std::log(f_hi);
    for (int i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / (points - 1);
        const double f = log_spacing ? std::exp(la + u * (lb - la))
                                     : f_lo + u * (f_hi - f_lo);
        curve.freq_hz.push_back(f);
        curve.gain.push_back(gain_at(tp, 2.0 * kPi * f, RL));
    }
    return curve;
}

PeakGain find_peak_gain(const TwoPort& tp, double f_lo, double f_hi, double RL) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo))
        throw std::invalid_argument("find_peak_gain: need 0 < f_lo < f_hi");
    auto mag = [&](double f) { return std::abs(gain_at(tp, 2.0 * kPi * f, RL)); };

    // Coarse log-spaced scan; fine enough to resolve a Q ~ 1e4 resonance.
    const int n = 4096;
    const double la = std::log(f_lo);
    const double lb = std::log(f_hi);
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double f = std::exp(la + (lb - la) * i / n);
        const double g = mag(f);
        if (g > best) {
            best = g;
            best_i = i;
        }
    }
    if (best_i == 0 || best_i == n)
        throw NumericalError(
            "find_peak_gain: maximum at bracket edge (flat or truncated response)");

    // Golden-section on log f within the bracketing pair of scan intervals.
    double a = la + (lb - la) * (best_i - 1) / n;
    double b = la + (lb - la) * (best_i + 1) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double g1 = mag(std::exp(x1));
    double g2 = mag(std::exp(x2));
    while (b - a > 1e-7) {  // log-f interval; 1e-7 ~ 1e-7 relative in f
        if (g1 < g2) {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + gr * (b - a);
            g2 = mag(std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - gr * (b - a);
            g1 = mag(std::exp(x1));
        }
    }
    const double fm = std::exp(0.5 * (a + b));
    return PeakGain{fm, mag(fm)};
}

}  // namespace piezotx
