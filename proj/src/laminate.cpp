#include "piezotx/laminate.hpp"

#include <stdexcept>

namespace piezotx {

namespace {

double layer_midplane(const LayerStack& stack, std::size_t index) {
    double z = 0.0;
    for (std::size_t i = 0; i < index; ++i) z += stack.layers[i].thickness;
    return z + 0.5 * stack.layers[index].thickness;
}

}  // namespace

const char* to_string(LayerRole role) {
    switch (role) {
        case LayerRole::substrate: return "substrate";
        case LayerRole::piezo_primary: return "piezo_primary";
        case LayerRole::piezo_secondary: return "piezo_secondary";
    }
    return "?";
}

void validate_stack(const LayerStack& stack, const MaterialLibrary& lib) {
    if (stack.layers.empty())
        throw std::invalid_argument("layer stack must not be empty");
    int substrates = 0;
    int piezos = 0;
    for (const Layer& l : stack.layers) {
        if (l.thickness <= 0.0)
            throw std::invalid_argument("layer '" + l.material +
                                        "': thickness must be > 0");
        if (l.role == LayerRole::substrate) {
            ++substrates;
        } else {
            ++piezos;
            lib.piezo_at(l.material);  // must resolve to a piezo material
        }
        lib.at(l.material);
    }
    if (substrates > 1)
        throw std::invalid_argument("layer stack has more than one substrate");
    if (piezos > 1)
        throw std::invalid_argument("layer stack has more than one piezo layer");
    if (piezos > 0 && stack.layers.size() < 2)
        throw std::invalid_argument(
            "a stack with a piezo layer needs at least two layers");
}

double stack_thickness(const LayerStack& stack) {
    double h = 0.0;
    for (const Layer& l : stack.layers) h += l.thickness;
    return h;
}

const Layer& find_layer(const LayerStack& stack, LayerRole role) {
    for (const Layer& l : stack.layers)
        if (l.role == role) return l;
    throw std::invalid_argument(std::string("stack has no layer with role '") +
                                to_string(role) + "'");
}

double neutral_axis(const LayerStack& stack, const MaterialLibrary& lib) {
    if (stack.layers.empty())
        throw std::invalid_argument("layer stack must not be empty");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const Layer& l = stack.layers[i];
        const double Eh = young_modulus(lib.at(l.material)) * l.thickness;
        num += Eh * layer_midplane(stack, i);
        den += Eh;
    }
    return num / den;
}

double flexural_rigidity(const LayerStack& stack, double width,
                         const MaterialLibrary& lib) {
    if (width <= 0.0) throw std::invalid_argument("width must be > 0");
    const double zbar = neutral_axis(stack, lib);
    double ei = 0.0;
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const Layer& l = stack.layers[i];
        const double e = young_modulus(lib.at(l.material));
        const double h = l.thickness;
        const double dz = layer_midplane(stack, i) - zbar;
        ei += e * (h * h * h / 12.0 + h * dz * dz);
    }
    return width * ei;
}

double mass_per_length(const LayerStack& stack, double width,
                       const MaterialLibrary& lib) {
    if (width <= 0.0) throw std::invalid_argument("width must be > 0");
    double mu = 0.0;
    for (const Layer& l : stack.layers)
        mu += density(lib.at(l.material)) * l.thickness;
    return width * mu;
}

double coupling_arm(const LayerStack& stack, LayerRole role,
                    const MaterialLibrary& lib) {
    const double zbar = neutral_axis(stack, lib);
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        if (stack.layers[i].role == role)
            return layer_midplane(stack, i) - zbar;
    }
    throw std::invalid_argument(std::string("stack has no layer with role '") +
                                to_string(role) + "'");
}

double plate_rigidity(const LayerStack& stack, double poisson,
                      const MaterialLibrary& lib) {
    if (poisson <= -1.0 || poisson >= 0.5)
        throw std::invalid_argument("poisson ratio out of range (-1, 0.5)");
    return flexural_rigidity(stack, 1.0, lib) / (1.0 - poisson * poisson);
}

double areal_mass(const LayerStack& stack, const MaterialLibrary& lib) {
    return mass_per_length(stack, 1.0, lib);
}

}  // namespace piezotx
