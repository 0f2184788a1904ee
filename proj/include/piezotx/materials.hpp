#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace piezotx {

/// Passive elastic material described by its 1D compliance.
struct ElasticMaterial {
    std::string name;
    double s11 = 0.0;  ///< elastic compliance, m^2/N
    double rho = 0.0;  ///< density, kg/m^3
};

/// Transverse-mode piezoelectric material.
struct PiezoMaterial {
    std::string name;
    double s11 = 0.0;     ///< elastic compliance, m^2/N
    double rho = 0.0;     ///< density, kg/m^3
    double d31 = 0.0;     ///< transverse piezoelectric coefficient, m/V (signed)
    double eps33T = 0.0;  ///< free permittivity, F/m

    /// Transverse coupling factor k31^2 = d31^2 / (s11 * eps33T).
    double coupling_k31_sq() const;
};

using Material = std::variant<ElasticMaterial, PiezoMaterial>;

const std::string& material_name(const Material& m);
double compliance_s11(const Material& m);
double density(const Material& m);

/// Young's modulus in the 1D beam sense, E = 1/s11.
double young_modulus(const Material& m);

/// Throws std::invalid_argument when a material violates its invariants
/// (non-positive s11/rho/eps33T, or k31^2 >= 1).
void validate(const Material& m);

/// Effective piezoelectric stress constant e31 = d31/s11, C/m^2. Sign preserved.
double effective_e31(const PiezoMaterial& p);

/// Clamped (constant-strain) permittivity eps33S = eps33T * (1 - k31^2), F/m.
/// Throws std::invalid_argument for k31^2 >= 1.
double clamped_permittivity(const PiezoMaterial& p);

/// Name-keyed material database. The built-in set covers the macro
/// transformer constants plus thin-film defaults for the micro devices;
/// every entry can be shadowed through the JSON config.
class MaterialLibrary {
public:
    /// Library pre-populated with the built-in materials:
    /// pzt_macro, metal_macro, pzt_film, aln_film, silicon.
    static MaterialLibrary builtins();

    /// Adds a material. Throws std::invalid_argument on duplicate name
    /// unless `allow_replace` is set, or when the material is invalid.
    void add(Material m, bool allow_replace = false);

    bool contains(std::string_view name) const;

    /// Throws std::out_of_range for unknown names.
    const Material& at(std::string_view name) const;

    /// Throws std::out_of_range when the named material is not piezoelectric.
    const PiezoMaterial& piezo_at(std::string_view name) const;

    std::vector<std::string> names() const;

private:
    std::map<std::string, Material, std::less<>> entries_;
};

}  // namespace piezotx
