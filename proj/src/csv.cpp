#include "piezotx/csv.hpp"

#include <charconv>
#include <fstream>

#include "piezotx/errors.hpp"

namespace piezotx {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void emit_csv(const std::filesystem::path& path, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write file: " + path.string());
    out << header << '\n';
    std::string line;
    for (const auto& row : rows) {
        line.clear();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += ',';
            line += format_double(row[i]);
        }
        line += '\n';
        out << line;
    }
    out.flush();
    if (!out)
        throw ConfigError("write failed: " + path.string());
}

}  // namespace piezotx
