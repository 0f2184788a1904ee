#pragma once

#include <optional>
#include <vector>

#include "piezotx/laminate.hpp"
#include "piezotx/materials.hpp"

namespace piezotx {

enum class ResonatorKind {
    beam_cantilever,
    bridge_clamped_clamped,
    beam_free_free,
    disc_clamped,
};

enum class BeamBC { cantilever, clamped_clamped, free_free };

const char* to_string(ResonatorKind kind);
bool is_disc(ResonatorKind kind);
BeamBC beam_bc(ResonatorKind kind);  // throws for disc kinds

/// Electrode interval [begin, end] along x for beams, or annulus [r1, r2]
/// for discs. Meters.
struct ElectrodeRegion {
    double begin = 0.0;
    double end = 0.0;
};

/// One resonator with its primary/secondary electrode regions. The
/// cross-section may differ between the regions (complementary-film
/// devices); the primary-region stack sets the global bending stiffness
/// and mass, per-region stacks set the electromechanical coupling.
struct DeviceGeometry {
    ResonatorKind kind = ResonatorKind::beam_free_free;
    double length = 0.0;  ///< beam length L, or disc radius a (m)
    double width = 0.0;   ///< beam width (m); unused for discs
    LayerStack primary_stack;
    LayerStack secondary_stack;
    ElectrodeRegion primary;
    ElectrodeRegion secondary;
    double poisson = 0.3;  ///< plate Poisson ratio (discs)
};

void validate_geometry(const DeviceGeometry& geom, const MaterialLibrary& lib);

/// One bending eigenmode, normalized to max |phi| = 1. Evaluates the shape
/// and its derivatives anywhere on [0, L] (or [0, a] radially).
class ModeShape {
public:
    ResonatorKind kind() const { return kind_; }
    int index() const { return index_; }
    /// Dimensionless eigenvalue: beta*L for beams, lambda for discs.
    double eigenvalue() const { return eigenvalue_; }
    double omega() const { return omega_; }  ///< rad/s
    double frequency_hz() const;
    double length() const { return length_; }

    double value(double x) const;
    double slope(double x) const;
    double curvature(double x) const;
    double third_derivative(double x) const;  // beams only

private:
    friend ModeShape beam_mode(const DeviceGeometry&, int, const MaterialLibrary&);
    friend ModeShape plate_mode(const DeviceGeometry&, int, const MaterialLibrary&);

    ResonatorKind kind_{};
    int index_ = 0;
    double eigenvalue_ = 0.0;
    double omega_ = 0.0;
    double length_ = 0.0;
    double scale_ = 1.0;  // 1 / max|phi_unnormalized|

    // beam coefficients
    BeamBC bc_{};
    double sigma_ = 0.0;
    double delta_ = 0.0;  // 1 - sigma, formed without cancellation

    // disc coefficients
    double j0_lam_ = 0.0;
    double i0e_lam_ = 0.0;

    double unnormalized(double x, int derivative) const;
};

/// First `count` positive roots of the beam characteristic equation,
/// cos(x)cosh(x) = 1 for clamped-clamped/free-free (x = 0 excluded) or
/// cos(x)cosh(x) = -1 for cantilevers.
std::vector<double> beam_char_roots(BeamBC bc, int count);

/// First `count` positive roots of the clamped axisymmetric plate equation
/// J0(x)I1(x) + I0(x)J1(x) = 0.
std::vector<double> plate_char_roots(int count);

/// Characteristic functions in numerically scaled form (bounded for large
/// arguments, same zeros). Used for residual checks.
double beam_char(BeamBC bc, double x);
double plate_char(double x);

ModeShape beam_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib);
ModeShape plate_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib);

/// Dispatches on geometry kind.
ModeShape device_mode(const DeviceGeometry& geom, int n, const MaterialLibrary& lib);

/// Modal mass: beams integral(mu phi^2 dx), discs integral(muA phi^2 2 pi r dr).
double modal_mass(const ModeShape& mode, const DeviceGeometry& geom,
                  const MaterialLibrary& lib);

}  // namespace piezotx
