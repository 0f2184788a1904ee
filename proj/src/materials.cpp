#include "piezotx/materials.hpp"

#include <stdexcept>
#include <utility>

#include "piezotx/constants.hpp"

namespace piezotx {

double PiezoMaterial::coupling_k31_sq() const {
    return d31 * d31 / (s11 * eps33T);
}

const std::string& material_name(const Material& m) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, m);
}

double compliance_s11(const Material& m) {
    return std::visit([](const auto& v) { return v.s11; }, m);
}

double density(const Material& m) {
    return std::visit([](const auto& v) { return v.rho; }, m);
}

double young_modulus(const Material& m) {
    return 1.0 / compliance_s11(m);
}

void validate(const Material& m) {
    const std::string& name = material_name(m);
    if (compliance_s11(m) <= 0.0)
        throw std::invalid_argument("material '" + name + "': s11 must be > 0");
    if (density(m) <= 0.0)
        throw std::invalid_argument("material '" + name + "': rho must be > 0");
    if (const auto* p = std::get_if<PiezoMaterial>(&m)) {
        if (p->eps33T <= 0.0)
            throw std::invalid_argument("material '" + name + "': eps33T must be > 0");
        if (p->coupling_k31_sq() >= 1.0)
            throw std::invalid_argument("material '" + name +
                                        "': coupling factor k31^2 must be < 1");
    }
}

double effective_e31(const PiezoMaterial& p) {
    return p.d31 / p.s11;
}

double clamped_permittivity(const PiezoMaterial& p) {
    const double k2 = p.coupling_k31_sq();
    if (k2 >= 1.0)
        throw std::invalid_argument("material '" + p.name +
                                    "': k31^2 >= 1, clamped permittivity undefined");
    return p.eps33T * (1.0 - k2);
}

MaterialLibrary MaterialLibrary::builtins() {
    MaterialLibrary lib;
    // Macro transformer constants. The metal substrate carries no published
    // name; E = 1/s11 = 200 GPa.
    lib.add(PiezoMaterial{"pzt_macro", 15.15e-12, 7800.0, -190e-12, 1800.0 * kEpsilon0});
    lib.add(ElasticMaterial{"metal_macro", 5e-12, 2690.0});
    // Thin films: only d31 is published. Both films default to the macro PZT
    // compliance so the coupling contrast between them equals the d31
    // contrast; rho/permittivity use nominal film values. All overridable.
    lib.add(PiezoMaterial{"pzt_film", 15.15e-12, 7800.0, 1.8e-10, 1800.0 * kEpsilon0});
    lib.add(PiezoMaterial{"aln_film", 15.15e-12, 3260.0, 2.65e-12, 10.0 * kEpsilon0});
    lib.add(ElasticMaterial{"silicon", 5.92e-12, 2330.0});
    return lib;
}

void MaterialLibrary::add(Material m, bool allow_replace) {
    validate(m);
    std::string name = material_name(m);
    auto it = entries_.find(name);
    if (it != entries_.end()) {
        if (!allow_replace)
            throw std::invalid_argument("material '" + name + "' already defined");
        it->second = std::move(m);
        return;
    }
    entries_.emplace(std::move(name), std::move(m));
}

bool MaterialLibrary::contains(std::string_view name) const {
    return entries_.find(name) != entries_.end();
}

const Material& MaterialLibrary::at(std::string_view name) const {
    auto it = entries_.find(name);
    if (it == entries_.end())
        throw std::out_of_range("unknown material '" + std::string(name) + "'");
    return it->second;
}

const PiezoMaterial& MaterialLibrary::piezo_at(std::string_view name) const {
    const Material& m = at(name);
    const auto* p = std::get_if<PiezoMaterial>(&m);
    if (p == nullptr)
        throw std::out_of_range("material '" + std::string(name) +
                                "' is not piezoelectric");
    return *p;
}

std::vector<std::string> MaterialLibrary::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

}  // namespace piezotx
