#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace piezotx {

/// Shortest representation that parses back to the same double bit pattern.
std::string format_double(double v);

/// RFC-4180-style CSV: header line plus one line per row, LF endings,
/// '.' decimal separator. Throws ConfigError on unwritable paths.
void emit_csv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::vector<double>>& rows);

}  // namespace piezotx
