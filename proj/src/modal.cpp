#include "piezotx/modal.hpp"

#include <cmath>
#include <stdexcept>

#include "piezotx/bessel.hpp"
#include "piezotx/constants.hpp"
#include "piezotx/numerics.hpp"

namespace piezotx {

namespace {

// 1/cosh without overflow for large x.
double sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

}  // namespace

const char* to_string(ResonatorKind kind) {
    switch (kind) {
        case ResonatorKind::beam_cantilever: return "beam_cantilever";
        case ResonatorKind::bridge_clamped_clamped: return "bridge_clamped_clamped";
        case ResonatorKind::beam_free_free: return "beam_free_free";
        case ResonatorKind::disc_clamped: return "disc_clamped";
    }
    return "?";
}

bool is_disc(ResonatorKind kind) { return kind == ResonatorKind::disc_clamped; }

BeamBC beam_bc(ResonatorKind kind) {
    switch (kind) {
        case ResonatorKind::beam_cantilever: return BeamBC::cantilever;
        case ResonatorKind::bridge_clamped_clamped: return BeamBC::clamped_clamped;
        case ResonatorKind::beam_free_free: return BeamBC::free_free;
        case ResonatorKind::disc_clamped: break;
    }
    throw std::invalid_argument("disc geometry has no beam boundary condition");
}

void validate_geometry(const DeviceGeometry& geom, const MaterialLibrary& lib) {
    if (geom.length <= 0.0)
        throw std::invalid_argument("geometry: length/radius must be > 0");
    if (!is_disc(geom.kind) && geom.width <= 0.0)
        throw std::invalid_argument("geometry: width must be > 0 for beams");
    validate_stack(geom.primary_stack, lib);
    validate_stack(geom.secondary_stack, lib);
    find_layer(geom.primary_stack, LayerRole::piezo_primary);
    find_layer(geom.secondary_stack, LayerRole::piezo_secondary);
    auto check_region = [&](const ElectrodeRegion& r, const char* which) {
        if (r.begin < 0.0 || r.end > geom.length || r.begin > r.end)
            throw std::invalid_argument(std::string("geometry: ") + which +
                                        " electrode region out of bounds");
    };
    check_region(geom.primary, "primary");
    check_region(geom.secondary, "secondary");
    const bool disjoint = geom.primary.end <= geom.secondary.begin ||
                          geom.secondary.end <= geom.primary.begin;
    if (!disjoint)
        throw std::invalid_argument(
            "geometry: primary and secondary electrode regions overlap");
}

double beam_char(BeamBC bc, double x) {
    // cos x cosh x = +/-1 rescaled by 1/cosh so the residual stays O(1).
    return (bc == BeamBC::cantilever) ? std::cos(x) + sech(x)
                                      : std::cos(x) - sech(x);
}

double plate_char(double x) {
    using namespace bessel;
    // J0 I1 + I0 J1 scaled by 1/I0; i1e/i0e = I1/I0.
    return j0(x) * (i1e(x) / i0e(x)) + j1(x);
}

std::vector<double> beam_char_roots(BeamBC bc, int count) {
    if (count < 1) throw std::invalid_argument("root count must be >= 1");
    const double step = kPi / 8.0;
    const double hi = (count + 2) * kPi * 1.5;
    // Scan starts one step in, skipping the double root of cos cosh = 1 at 0.
    return scan_roots([bc](double x) { return beam_char(bc, x); }, step, hi, step,
                      count);
}

std::vector<double> plate_char_roots(int count) {
    if (count < 1) throw std::invalid_argument("root count must be >= 1");
    const double step = kPi / 8.0;
    const double hi = (count + 2) * kPi * 1.5;
    return scan_roots([](double x) { return plate_char(x); }, step, hi, step, count);
}

double ModeShape::frequency_hz() const { return omega_ / (2.0 * kPi); }

double ModeShape::unnormalized(double x, int derivative) const {
    if (kind_ == ResonatorKind::disc_clamped) {
        using namespace bessel;
        const double lam = eigenvalue_;
        const double a = length_;
        const double u = lam * x / a;
        // C I_n(u) evaluated as J0(lam) e^(u-lam) i_ne(u) / i0e(lam); the
        // exponential factor is <= 1 on [0, a].
        const double cfac = j0_lam_ * std::exp(u - lam) / i0e_lam_;
        switch (derivative) {
            case 0:
                return j0(u) - cfac * i0e(u);
            case 1:
                return -(lam / a) * (j1(u) + cfac * i1e(u));
            case 2: {
                const double s = lam / a;
                if (u == 0.0) return -s * s * 0.5 * (1.0 + j0_lam_ / i0e_lam_ * std::exp(-lam));
                // d/du J1(u) = J0 - J1/u ; d/du I1(u) = I0 - I1/u
                const double dj1 = j0(u) - j1(u) / u;
                const double di1 = i0e(u) - i1e(u) / u;
                return -s * s * (dj1 + cfac * di1);
            }
            default:
                throw std::invalid_argument("disc modes expose phi, phi', phi''");
        }
    }

    const double beta = eigenvalue_ / length_;
    const double t = beta * x;
    // cosh t - sigma sinh t and sinh t - sigma cosh t, written with
    // delta = 1 - sigma so no large-argument cancellation occurs.
    const double ep = std::exp(t);
    const double em = std::exp(-t);
    const double hc = 0.5 * (delta_ * ep + (2.0 - delta_) * em);
    const double hs = 0.5 * (delta_ * ep - (2.0 - delta_) * em);
    const double c = std::cos(t);
    const double s = std::sin(t);
    double v = 0.0;
    if (bc_ == BeamBC::free_free) {
        // cosh + cos - sigma (sinh + sin)
        switch (derivative) {
            case 0: v = hc + c - sigma_ * s; break;
            case 1: v = hs - s - sigma_ * c; break;
            case 2: v = hc - c + sigma_ * s; break;
            case 3: v = hs + s + sigma_ * c; break;
            default: throw std::invalid_argument("derivative order out of range");
        }
    } else {
        // cosh - cos - sigma (sinh - sin)
        switch (derivative) {
            case 0: v = hc - c + sigma_ * s; break;
            case 1: v = hs + s + sigma_ * c; break;
            case 2: v = hc + c - sigma_ * s; break;
            case 3: v = hs - s - sigma_ * c; break;
            default: throw std::invalid_argument("derivative order out of range");
        }
    }
    double p = 1.0;
    for (int i = 0; i < derivative; ++i) p *= beta;
    return p * v;
}

double ModeShape::value(double x) const { return scale_ * unnormalized(x, 0); }
double ModeShape::slope(double x) const { return scale_ * unnormalized(x, 1); }
double ModeShape::curvature(double x) const { return scale_ * unnormalized(x, 2); }

double ModeShape::third_derivative(double x) const {
    if (kind_ == ResonatorKind::disc_clamped)
        throw std::invalid_argument("third derivative not provided for disc modes");
    return scale_ * unnormalized(x, 3);
}

namespace {

// Dense scan plus golden-section polish of max |phi| over [0, L].
double find_max_abs(const ModeShape& shape, double length) {
    const int n = 8192;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = length * i / n;
        const double v = std::abs(shape.value(x));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double a = length * std::max(0, best_i - 1) / n;
    double b = length * std::min(n, best_i + 1) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = std::abs(shape.value(x1));
    double f2 = std::abs(shape.value(x2));
    for (int it = 0; it < 90 && (b - a) > 1e-17 * length; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = std::abs(shape.value(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = std::abs(shape.value(x1));
        }
    }
    return std::max(best, std::max(f1, f2));
}

}  // namespace

ModeShape beam_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib) {
    if (is_disc(geom.kind))
        throw std::invalid_argument("beam_mode: geometry is a disc");
    if (n < 1) throw std::invalid_argument("mode index must be >= 1");
    const BeamBC bc = beam_bc(geom.kind);
    const double root = beam_char_roots(bc, n).back();

    ModeShape m;
    m.kind_ = geom.kind;
    m.index_ = n;
    m.eigenvalue_ = root;
    m.length_ = geom.length;
    m.bc_ = bc;

    const double T = root;
    const double ch = std::cosh(T);
    const double sh = std::sinh(T);
    const double c = std::cos(T);
    const double s = std::sin(T);
    if (bc == BeamBC::cantilever) {
        m.sigma_ = (sh - s) / (ch + c);
        m.delta_ = (std::exp(-T) + c + s) / (ch + c);
    } else {
        m.sigma_ = (ch - c) / (sh - s);
        m.delta_ = (c - s - std::exp(-T)) / (sh - s);
    }

    const double ei = flexural_rigidity(geom.primary_stack, geom.width, lib);
    const double mu = mass_per_length(geom.primary_stack, geom.width, lib);
    m.omega_ = (root * root) / (geom.length * geom.length) * std::sqrt(ei / mu);

    m.scale_ = 1.0;
    m.scale_ = 1.0 / find_max_abs(m, geom.length);
    return m;
}

ModeShape plate_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib) {
    if (!is_disc(geom.kind))
        throw std::invalid_argument("plate_mode: geometry is not a disc");
    if (n < 1) throw std::invalid_argument("mode index must be >= 1");
    const double lam = plate_char_roots(n).back();

    ModeShape m;
    m.kind_ = geom.kind;
    m.index_ = n;
    m.eigenvalue_ = lam;
    m.length_ = geom.length;
    m.j0_lam_ = bessel::j0(lam);
    m.i0e_lam_ = bessel::i0e(lam);

    const double d = plate_rigidity(geom.primary_stack, geom.poisson, lib);
    const double mu_a = areal_mass(geom.primary_stack, lib);
    const double a = geom.length;
    m.omega_ = (lam / a) * (lam / a) * std::sqrt(d / mu_a);

    m.scale_ = 1.0;
    m.scale_ = 1.0 / find_max_abs(m, a);
    return m;
}

ModeShape device_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib) {
    return is_disc(geom.kind) ? plate_mode(geom, n, lib) : beam_mode(geom, n, lib);
}

double modal_mass(const ModeShape& mode, const DeviceGeometry& geom,
                  const MaterialLibrary& lib) {
    if (is_disc(geom.kind)) {
        const double mu_a = areal_mass(geom.primary_stack, lib);
        const double a = geom.length;
        return integrate(
            [&](double r) {
                const double p = mode.value(r);
                return mu_a * p * p * 2.0 * kPi * r;
            },
            0.0, a, 1e-8);
    }
    const double mu = mass_per_length(geom.primary_stack, geom.width, lib);
    return integrate(
        [&](double x) {
            const double p = mode.value(x);
            return mu * p * p;
        },
        0.0, geom.length, 1e-8);
}

}  // namespace piezotx
