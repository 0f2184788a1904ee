#pragma once

#include <string>
#include <vector>

#include "piezotx/materials.hpp"

namespace piezotx {

enum class LayerRole { substrate, piezo_primary, piezo_secondary };

const char* to_string(LayerRole role);

struct Layer {
    std::string material;  ///< name resolved through a MaterialLibrary
    double thickness = 0.0;  ///< m
    LayerRole role = LayerRole::substrate;
};

/// Laminate cross-section, layers ordered bottom to top. z = 0 at the
/// stack bottom; layer extents follow from the cumulative thicknesses.
struct LayerStack {
    std::vector<Layer> layers;
};

/// Throws std::invalid_argument on empty stacks, non-positive thicknesses,
/// more than one substrate or piezo layer, or unresolvable material names.
void validate_stack(const LayerStack& stack, const MaterialLibrary& lib);

double stack_thickness(const LayerStack& stack);

/// Midplane z of the layer with the given role. Throws when absent.
const Layer& find_layer(const LayerStack& stack, LayerRole role);

/// Transformed-section neutral axis, measured from the stack bottom:
/// zbar = sum(E_i h_i z_i) / sum(E_i h_i) with z_i the layer midplanes.
double neutral_axis(const LayerStack& stack, const MaterialLibrary& lib);

/// Bending rigidity EI = w * sum(E_i (h_i^3/12 + h_i (z_i - zbar)^2)), N.m^2.
double flexural_rigidity(const LayerStack& stack, double width,
                         const MaterialLibrary& lib);

/// Mass per unit length mu = w * sum(rho_i h_i), kg/m.
double mass_per_length(const LayerStack& stack, double width,
                       const MaterialLibrary& lib);

/// Signed moment arm of the requested piezo layer's midplane about the
/// neutral axis. Throws when the role is absent from the stack.
double coupling_arm(const LayerStack& stack, LayerRole role,
                    const MaterialLibrary& lib);

/// Kirchhoff plate rigidity per unit width, D = EI(w=1) / (1 - nu^2), N.m.
double plate_rigidity(const LayerStack& stack, double poisson,
                      const MaterialLibrary& lib);

/// Areal mass sum(rho_i h_i), kg/m^2.
double areal_mass(const LayerStack& stack, const MaterialLibrary& lib);

}  // namespace piezotx
