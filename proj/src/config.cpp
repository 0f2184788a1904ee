#include "piezotx/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "piezotx/constants.hpp"
#include "piezotx/errors.hpp"

namespace piezotx {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    expect_object(obj, path);
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) fail(path + "." + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required value");
    if (!it->is_number()) fail(path + "." + key, "expected a number");
    return it->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const char* key,
                     double def) {
    const auto it = obj.find(key);
    if (it == obj.end()) return def;
    if (!it->is_number()) fail(path + "." + key, "expected a number");
    return it->get<double>();
}

std::optional<double> get_number_or_null(const json& obj, const std::string& path,
                                         const char* key,
                                         std::optional<double> def) {
    const auto it = obj.find(key);
    if (it == obj.end()) return def;
    if (it->is_null()) return std::nullopt;
    if (!it->is_number()) fail(path + "." + key, "expected a number or null");
    return it->get<double>();
}

long long get_integer_or(const json& obj, const std::string& path, const char* key,
                         long long def) {
    const auto it = obj.find(key);
    if (it == obj.end()) return def;
    if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
    return it->get<long long>();
}

bool get_bool_or(const json& obj, const std::string& path, const char* key,
                 bool def) {
    const auto it = obj.find(key);
    if (it == obj.end()) return def;
    if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required value");
    if (!it->is_string()) fail(path + "." + key, "expected a string");
    return it->get<std::string>();
}

void parse_materials(const json& obj, const std::string& path,
                     MaterialLibrary& lib) {
    expect_object(obj, path);
    for (const auto& [name, def] : obj.items()) {
        const std::string mpath = path + "." + name;
        check_keys(def, mpath, {"s11", "rho", "d31", "eps_r"});
        const double s11 = get_number(def, mpath, "s11");
        const double rho = get_number(def, mpath, "rho");
        const bool piezo = def.contains("d31") || def.contains("eps_r");
        try {
            if (piezo) {
                const double d31 = get_number(def, mpath, "d31");
                const double eps_r = get_number(def, mpath, "eps_r");
                lib.add(PiezoMaterial{name, s11, rho, d31, eps_r * kEpsilon0},
                        /*allow_replace=*/true);
            } else {
                lib.add(ElasticMaterial{name, s11, rho}, /*allow_replace=*/true);
            }
        } catch (const std::invalid_argument& e) {
            fail(mpath, e.what());
        }
    }
}

LayerRole parse_role(const std::string& s, const std::string& path) {
    if (s == "substrate") return LayerRole::substrate;
    if (s == "piezo_primary") return LayerRole::piezo_primary;
    if (s == "piezo_secondary") return LayerRole::piezo_secondary;
    fail(path, "unknown layer role '" + s + "'");
}

LayerStack parse_stack(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array");
    LayerStack stack;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string lpath = path + "[" + std::to_string(i) + "]";
        const json& lj = arr[i];
        check_keys(lj, lpath, {"material", "thickness_m", "role"});
        Layer layer;
        layer.material = get_string(lj, lpath, "material");
        layer.thickness = get_number(lj, lpath, "thickness_m");
        if (layer.thickness <= 0.0) fail(lpath + ".thickness_m", "must be > 0");
        layer.role = parse_role(get_string(lj, lpath, "role"), lpath + ".role");
        stack.layers.push_back(std::move(layer));
    }
    return stack;
}

ElectrodeRegion parse_region(const json& obj, const std::string& path,
                             const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required value");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
        !(*it)[1].is_number())
        fail(path + "." + key, "expected [begin_m, end_m]");
    ElectrodeRegion r;
    r.begin = (*it)[0].get<double>();
    r.end = (*it)[1].get<double>();
    if (r.begin > r.end) fail(path + "." + key, "begin must be <= end");
    return r;
}

ResonatorKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "beam_cantilever") return ResonatorKind::beam_cantilever;
    if (s == "bridge_clamped_clamped") return ResonatorKind::bridge_clamped_clamped;
    if (s == "beam_free_free") return ResonatorKind::beam_free_free;
    if (s == "disc_clamped") return ResonatorKind::disc_clamped;
    fail(path, "unknown resonator kind '" + s + "'");
}

LayerStack derive_secondary(const LayerStack& stack) {
    LayerStack out = stack;
    for (Layer& l : out.layers)
        if (l.role == LayerRole::piezo_primary) l.role = LayerRole::piezo_secondary;
    return out;
}

DeviceGeometry parse_geometry(const json& obj, const std::string& path,
                              const MaterialLibrary& lib) {
    check_keys(obj, path,
               {"kind", "length_m", "radius_m", "width_m", "stack",
                "secondary_stack", "primary_region_m", "secondary_region_m",
                "poisson"});
    DeviceGeometry g;
    g.kind = parse_kind(get_string(obj, path, "kind"), path + ".kind");
    if (is_disc(g.kind)) {
        if (obj.contains("length_m") || obj.contains("width_m"))
            fail(path, "discs take radius_m, not length_m/width_m");
        g.length = get_number(obj, path, "radius_m");
        g.width = 0.0;
    } else {
        if (obj.contains("radius_m")) fail(path + ".radius_m", "beams take length_m");
        g.length = get_number(obj, path, "length_m");
        g.width = get_number(obj, path, "width_m");
        if (g.width <= 0.0) fail(path + ".width_m", "must be > 0");
    }
    if (g.length <= 0.0) fail(path, "length/radius must be > 0");

    const auto it = obj.find("stack");
    if (it == obj.end()) fail(path + ".stack", "missing required value");
    g.primary_stack = parse_stack(*it, path + ".stack");
    if (const auto sit = obj.find("secondary_stack"); sit != obj.end())
        g.secondary_stack = parse_stack(*sit, path + ".secondary_stack");
    else
        g.secondary_stack = derive_secondary(g.primary_stack);

    g.primary = parse_region(obj, path, "primary_region_m");
    g.secondary = parse_region(obj, path, "secondary_region_m");
    g.poisson = get_number_or(obj, path, "poisson", 0.3);

    try {
        validate_geometry(g, lib);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return g;
}

DiodeModel parse_diode(const json& obj, const std::string& path) {
    const std::string model = get_string(obj, path, "model");
    if (model == "exponential") {
        check_keys(obj, path, {"model", "is_a", "ideality", "vt_v"});
        ExponentialDiode d;
        d.Is = get_number_or(obj, path, "is_a", d.Is);
        d.n = get_number_or(obj, path, "ideality", d.n);
        d.VT = get_number_or(obj, path, "vt_v", d.VT);
        if (d.Is <= 0.0) fail(path + ".is_a", "must be > 0");
        if (d.n <= 0.0) fail(path + ".ideality", "must be > 0");
        if (d.VT <= 0.0) fail(path + ".vt_v", "must be > 0");
        return d;
    }
    if (model == "ideal_switch") {
        check_keys(obj, path, {"model", "ron_ohm", "goff_s", "vdrop_v"});
        IdealSwitchDiode d;
        d.Ron = get_number_or(obj, path, "ron_ohm", d.Ron);
        d.Goff = get_number_or(obj, path, "goff_s", d.Goff);
        d.Vdrop = get_number_or(obj, path, "vdrop_v", d.Vdrop);
        if (d.Ron <= 0.0) fail(path + ".ron_ohm", "must be > 0");
        if (d.Goff < 0.0) fail(path + ".goff_s", "must be >= 0");
        if (d.Vdrop < 0.0) fail(path + ".vdrop_v", "must be >= 0");
        return d;
    }
    fail(path + ".model", "expected 'exponential' or 'ideal_switch'");
}

SineSource parse_source(const json& obj, const std::string& path) {
    check_keys(obj, path, {"amplitude_v", "frequency_hz", "rs_ohm"});
    SineSource s;
    s.amplitude = get_number(obj, path, "amplitude_v");
    s.frequency = get_number(obj, path, "frequency_hz");
    s.rs = get_number_or(obj, path, "rs_ohm", 1e3);
    if (s.frequency <= 0.0) fail(path + ".frequency_hz", "must be > 0");
    if (s.rs <= 0.0) fail(path + ".rs_ohm", "must be > 0");
    return s;
}

PumpSpec parse_pump(const json& obj, const std::string& path, ScenarioKind kind) {
    check_keys(obj, path,
               {"levels", "c_stage_f", "c_load_f", "r_load_ohm", "diode", "source",
                "dt_s", "t_end_s", "steady_tol", "max_steps", "store_all_nodes"});
    PumpSpec p;
    const long long levels = get_integer_or(obj, path, "levels", p.levels);
    if (levels < 1) fail(path + ".levels", "must be >= 1");
    p.levels = static_cast<int>(levels);
    p.c_stage = get_number_or(obj, path, "c_stage_f", p.c_stage);
    p.c_load = get_number_or(obj, path, "c_load_f", p.c_load);
    if (p.c_stage <= 0.0) fail(path + ".c_stage_f", "must be > 0");
    if (p.c_load <= 0.0) fail(path + ".c_load_f", "must be > 0");
    p.r_load = get_number_or_null(obj, path, "r_load_ohm", std::nullopt);
    if (p.r_load && *p.r_load <= 0.0) fail(path + ".r_load_ohm", "must be > 0");
    if (const auto it = obj.find("diode"); it != obj.end())
        p.diode = parse_diode(*it, path + ".diode");
    if (const auto it = obj.find("source"); it != obj.end()) {
        if (kind == ScenarioKind::chain)
            fail(path + ".source",
                 "the chain scenario derives the source from the two-port");
        p.source = parse_source(*it, path + ".source");
    }
    const auto dt = get_number_or_null(obj, path, "dt_s", std::nullopt);
    p.dt = dt.value_or(0.0);
    if (dt && *dt <= 0.0) fail(path + ".dt_s", "must be > 0");
    p.t_end = get_number_or_null(obj, path, "t_end_s", std::nullopt);
    if (p.t_end && *p.t_end <= 0.0) fail(path + ".t_end_s", "must be > 0");
    p.steady_tol = get_number_or(obj, path, "steady_tol", p.steady_tol);
    if (p.steady_tol <= 0.0) fail(path + ".steady_tol", "must be > 0");
    const long long ms =
        get_integer_or(obj, path, "max_steps", static_cast<long long>(p.max_steps));
    if (ms < 1) fail(path + ".max_steps", "must be >= 1");
    p.max_steps = static_cast<std::size_t>(ms);
    p.store_all_nodes = get_bool_or(obj, path, "store_all_nodes", false);
    return p;
}

}  // namespace

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::modes: return "modes";
        case ScenarioKind::sweep: return "sweep";
        case ScenarioKind::pump: return "pump";
        case ScenarioKind::chain: return "chain";
    }
    return "?";
}

DeviceGeometry with_films(const DeviceGeometry& geom, const FilmSet& films) {
    DeviceGeometry g = geom;
    for (Layer& l : g.primary_stack.layers)
        if (l.role == LayerRole::piezo_primary) l.material = films.primary;
    for (Layer& l : g.secondary_stack.layers)
        if (l.role == LayerRole::piezo_secondary) l.material = films.secondary;
    return g;
}

Scenario parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON syntax error: ") + e.what());
    }

    const std::string path = "$";
    check_keys(root, path,
               {"kind", "materials", "geometry", "mode_index", "mode_count",
                "q_factor", "load_ohm", "sweep", "film_sets", "pump", "drive"});

    Scenario s;
    const std::string kind = get_string(root, path, "kind");
    if (kind == "modes") s.kind = ScenarioKind::modes;
    else if (kind == "sweep") s.kind = ScenarioKind::sweep;
    else if (kind == "pump") s.kind = ScenarioKind::pump;
    else if (kind == "chain") s.kind = ScenarioKind::chain;
    else fail(path + ".kind", "expected one of modes|sweep|pump|chain");

    s.materials = MaterialLibrary::builtins();
    if (const auto it = root.find("materials"); it != root.end())
        parse_materials(*it, path + ".materials", s.materials);

    if (const auto it = root.find("geometry"); it != root.end())
        s.geometry = parse_geometry(*it, path + ".geometry", s.materials);

    const bool needs_geometry = s.kind != ScenarioKind::pump;
    if (needs_geometry && !s.geometry)
        fail(path + ".geometry", "missing required value");

    const long long mi = get_integer_or(root, path, "mode_index", 1);
    if (mi < 1) fail(path + ".mode_index", "must be >= 1");
    s.mode_index = static_cast<int>(mi);
    const long long mc = get_integer_or(root, path, "mode_count", 5);
    if (mc < 1) fail(path + ".mode_count", "must be >= 1");
    s.mode_count = static_cast<int>(mc);
    s.q_factor = get_number_or(root, path, "q_factor", 200.0);
    if (s.q_factor <= 0.0) fail(path + ".q_factor", "must be > 0");

    const auto load = get_number_or_null(root, path, "load_ohm", 1e7);
    s.load_ohm = load ? *load : std::numeric_limits<double>::infinity();
    if (s.load_ohm <= 0.0) fail(path + ".load_ohm", "must be > 0 (or null for open)");

    if (const auto it = root.find("sweep"); it != root.end()) {
        const std::string spath = path + ".sweep";
        check_keys(*it, spath, {"f_lo_hz", "f_hi_hz", "points", "log_spacing"});
        s.sweep.f_lo_hz = get_number_or_null(*it, spath, "f_lo_hz", std::nullopt);
        s.sweep.f_hi_hz = get_number_or_null(*it, spath, "f_hi_hz", std::nullopt);
        if (s.sweep.f_lo_hz && *s.sweep.f_lo_hz <= 0.0)
            fail(spath + ".f_lo_hz", "must be > 0");
        if (s.sweep.f_lo_hz && s.sweep.f_hi_hz &&
            *s.sweep.f_hi_hz <= *s.sweep.f_lo_hz)
            fail(spath + ".f_hi_hz", "must be > f_lo_hz");
        const long long pts = get_integer_or(*it, spath, "points", 2001);
        if (pts < 2) fail(spath + ".points", "must be >= 2");
        s.sweep.points = static_cast<int>(pts);
        s.sweep.log_spacing = get_bool_or(*it, spath, "log_spacing", true);
    }

    if (const auto it = root.find("film_sets"); it != root.end()) {
        const std::string fpath = path + ".film_sets";
        if (s.kind != ScenarioKind::sweep)
            fail(fpath, "only valid for sweep scenarios");
        if (!it->is_array() || it->size() != 2)
            fail(fpath, "expected exactly two film sets");
        for (std::size_t i = 0; i < 2; ++i) {
            const std::string epath = fpath + "[" + std::to_string(i) + "]";
            check_keys((*it)[i], epath, {"primary", "secondary"});
            FilmSet set;
            set.primary = get_string((*it)[i], epath, "primary");
            set.secondary = get_string((*it)[i], epath, "secondary");
            for (const std::string* m : {&set.primary, &set.secondary}) {
                if (!s.materials.contains(*m)) fail(epath, "unknown material '" + *m + "'");
                try {
                    s.materials.piezo_at(*m);
                } catch (const std::out_of_range& e) {
                    fail(epath, e.what());
                }
            }
            s.film_sets.push_back(std::move(set));
        }
    }

    if (const auto it = root.find("pump"); it != root.end()) {
        if (s.kind != ScenarioKind::pump && s.kind != ScenarioKind::chain)
            fail(path + ".pump", "only valid for pump/chain scenarios");
        s.pump = parse_pump(*it, path + ".pump", s.kind);
    }
    if (s.kind == ScenarioKind::pump && !s.pump.source)
        fail(path + ".pump.source", "missing required value");

    if (const auto it = root.find("drive"); it != root.end()) {
        if (s.kind != ScenarioKind::chain)
            fail(path + ".drive", "only valid for chain scenarios");
        const std::string dpath = path + ".drive";
        check_keys(*it, dpath, {"amplitude_v", "frequency_hz"});
        s.drive.amplitude = get_number(*it, dpath, "amplitude_v");
        s.drive.frequency = get_number(*it, dpath, "frequency_hz");
        if (s.drive.frequency <= 0.0) fail(dpath + ".frequency_hz", "must be > 0");
    }

    return s;
}

std::string apply_override(const std::string& json_text,
                           const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like path.to.key=value, got '" +
                          assignment + "'");
    const std::string dotted = assignment.substr(0, eq);
    const std::string value_text = assignment.substr(eq + 1);

    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("JSON syntax error: ") + e.what());
    }

    json value;
    try {
        value = json::parse(value_text);
    } catch (const json::parse_error&) {
        value = value_text;  // bare strings allowed
    }

    json* node = &root;
    std::size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const std::string key = dotted.substr(pos, dot - pos);
        if (key.empty()) throw ConfigError("override path has an empty segment");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        if (!node->contains(key) || !(*node)[key].is_object())
            (*node)[key] = json::object();
        node = &(*node)[key];
        pos = dot + 1;
    }
    return root.dump();
}

}  // namespace piezotx
