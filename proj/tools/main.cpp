#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "piezotx/config.hpp"
#include "piezotx/errors.hpp"
#include "piezotx/scenario.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("PIEZOTX_LOG");
    if (env == nullptr) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw piezotx::ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SubcommandArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
};

int run(const std::string& kind, const SubcommandArgs& args) {
    const int verbosity = log_level();
    std::string text = read_file(args.config_path);
    for (const std::string& ov : args.overrides)
        text = piezotx::apply_override(text, ov);

    piezotx::Scenario scenario = piezotx::parse_config(text);
    if (piezotx::to_string(scenario.kind) != kind)
        throw piezotx::ConfigError("config kind '" +
                                   std::string(piezotx::to_string(scenario.kind)) +
                                   "' does not match subcommand '" + kind + "'");
    scenario.out_dir = args.out_dir;

    if (verbosity >= 2)
        std::cerr << "[piezotx] running " << kind << " from " << args.config_path
                  << " into " << args.out_dir << "\n";

    const piezotx::RunReport report = piezotx::run_scenario(scenario);

    if (verbosity >= 1) {
        std::cerr << "[piezotx] " << kind << " done in " << report.wall_seconds
                  << " s; wrote:";
        for (const auto& f : report.files) std::cerr << ' ' << f;
        std::cerr << '\n';
        for (const auto& [key, value] : report.headline)
            std::cerr << "[piezotx]   " << key << " = " << value << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piezoelectric micro-transformer and charge-pump simulation"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"modes", "sweep", "pump", "chain"};
    const std::vector<std::string> descriptions = {
        "Bending eigenfrequency table",
        "Two-port voltage-gain frequency sweep (optionally a film comparison)",
        "Schenkel charge-pump transient",
        "Transformer-driven charge-pump chain",
    };
    std::vector<SubcommandArgs> args(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        CLI::App* sub = app.add_subcommand(kinds[i], descriptions[i]);
        sub->add_option("--config", args[i].config_path, "JSON scenario config")
            ->required();
        sub->add_option("--out", args[i].out_dir, "output directory")
            ->capture_default_str();
        sub->add_option("--override", args[i].overrides,
                        "dotted-path override, e.g. pump.levels=40");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < kinds.size(); ++i)
            if (app.got_subcommand(kinds[i])) return run(kinds[i], args[i]);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const piezotx::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
