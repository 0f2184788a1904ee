#pragma once

#include <map>
#include <string>
#include <vector>

#include "piezotx/config.hpp"

namespace piezotx {

struct RunReport {
    ScenarioKind kind = ScenarioKind::modes;
    std::vector<std::string> files;  ///< produced files, relative to out_dir
    std::map<std::string, double> headline;
    double wall_seconds = 0.0;  ///< informational; not serialized
};

/// Executes the scenario, writing its artifacts under scenario.out_dir
/// (created when missing) plus a report.json. Artifact bytes depend only
/// on the scenario inputs.
RunReport run_scenario(const Scenario& s);

}  // namespace piezotx
