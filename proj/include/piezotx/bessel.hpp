#pragma once

namespace piezotx::bessel {

// Bessel functions of order 0/1, real argument. Power series for |x| <= 12,
// Hankel-type asymptotic expansions beyond; relative accuracy ~1e-10 or
// better away from zeros.

double j0(double x);
double j1(double x);
double i0(double x);
double i1(double x);

/// Exponentially scaled modified functions, e^-|x| I_n(x). These keep the
/// clamped-plate characteristic function O(1) at large argument.
double i0e(double x);
double i1e(double x);

}  // namespace piezotx::bessel
