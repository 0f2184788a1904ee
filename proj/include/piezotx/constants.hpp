#pragma once

namespace piezotx {

inline constexpr double kPi = 3.14159265358979323846;

/// Vacuum permittivity, F/m.
inline constexpr double kEpsilon0 = 8.8541878128e-12;

}  // namespace piezotx
