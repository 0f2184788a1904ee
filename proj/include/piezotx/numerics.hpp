#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "piezotx/errors.hpp"

namespace piezotx {

/// Bisects a bracketing interval [a, b] (f(a) and f(b) of opposite sign)
/// down to machine-limited width. Deterministic; ~100 halvings.
template <class F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericalError("bisect: interval does not bracket a root");
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // interval collapsed to adjacent doubles
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// Scans (lo, hi] with the given step, bisecting every sign change, until
/// `count` roots are collected. Grid points that land exactly on a root are
/// taken as-is.
template <class F>
std::vector<double> scan_roots(F&& f, double lo, double hi, double step, int count) {
    std::vector<double> roots;
    double x0 = lo;
    double f0 = f(x0);
    for (double x1 = lo + step; x1 <= hi + 0.5 * step && (int)roots.size() < count;
         x1 += step) {
        const double f1 = f(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
        } else if (f0 != 0.0 && (f0 > 0.0) != (f1 > 0.0)) {
            roots.push_back(bisect(f, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    if ((int)roots.size() < count)
        throw NumericalError("scan_roots: bracket exhausted before finding all roots");
    return roots;
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double m, double b, double fa, double fm,
                    double fb, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Simpson error shrinks ~16x per halving while the budget halves, so
    // the recursion terminates at modest depth.
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b]. The error budget is global:
/// rel_tol scales with a coarse estimate of the integral (its absolute-value
/// panel sum guards near-cancelling integrands), abs_tol is a hard floor.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0) {
    if (a == b) return 0.0;
    const int panels = 8;
    const double h = (b - a) / panels;
    double coarse = 0.0;
    double coarse_abs = 0.0;
    double x0s[panels], xms[panels], x1s[panels];
    double f0s[panels], fms[panels], f1s[panels], wholes[panels];
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i == panels - 1) ? b : x0 + h;
        const double xm = 0.5 * (x0 + x1);
        const double f0 = f(x0);
        const double fm = f(xm);
        const double f1 = f(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        x0s[i] = x0; xms[i] = xm; x1s[i] = x1;
        f0s[i] = f0; fms[i] = fm; f1s[i] = f1;
        wholes[i] = whole;
        coarse += whole;
        coarse_abs += std::abs(whole);
    }
    const double eps = std::max({abs_tol, rel_tol * std::abs(coarse),
                                 1e-15 * coarse_abs, 1e-300});
    double total = 0.0;
    for (int i = 0; i < panels; ++i)
        total += detail::simpson_step(f, x0s[i], xms[i], x1s[i], f0s[i], fms[i],
                                      f1s[i], wholes[i], eps / panels, 40);
    return total;
}

}  // namespace piezotx
