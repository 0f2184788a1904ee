#pragma once

#include <stdexcept>
#include <string>

namespace piezotx {

/// Invalid or inconsistent user configuration (bad JSON, unknown key,
/// out-of-range value). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed to converge or produced an unusable
/// result. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace piezotx
