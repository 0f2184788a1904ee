#include "piezotx/bessel.hpp"

#include <cmath>

namespace piezotx::bessel {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr double kPi = 3.14159265358979323846;

double series_j0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

double series_j1(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return 0.5 * x * sum;
}

double series_i0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

double series_i1(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1.0));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return 0.5 * x * sum;
}

// Hankel modulus/phase series, optimally truncated:
//   J_nu(x) = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
//   chi = x - (nu/2 + 1/4) pi,
//   P = sum (-1)^k A_{2k},  Q = sum (-1)^k A_{2k+1},
//   A_m = prod_{j=1..m} (4 nu^2 - (2j-1)^2) / (m! (8x)^m).
void hankel_pq(double nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    const double ix = 1.0 / (8.0 * x);
    p = 1.0;
    q = 0.0;
    double a = 1.0;
    double prev = 1e300;
    for (int m = 1; m < 40; ++m) {
        a *= (mu - (2.0 * m - 1.0) * (2.0 * m - 1.0)) * ix / m;
        const double mag = std::abs(a);
        if (mag >= prev) break;  // asymptotic series started diverging
        prev = mag;
        if (m % 2 == 1) {
            q += (((m - 1) / 2) % 2 == 0 ? a : -a);
        } else {
            p += ((m / 2) % 2 == 0 ? a : -a);
        }
        if (mag < 1e-18) break;
    }
}

double asymptotic_j(double nu, double x) {
    double p, q;
    hankel_pq(nu, x, p, q);
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// e^-x I_nu(x) ~ (2 pi x)^-1/2 sum (-1)^m A_m, same A_m as above.
double asymptotic_ie(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    const double ix = 1.0 / (8.0 * x);
    double sum = 1.0;
    double a = 1.0;
    double prev = 1e300;
    for (int m = 1; m < 40; ++m) {
        a *= (mu - (2.0 * m - 1.0) * (2.0 * m - 1.0)) * ix / m;
        const double mag = std::abs(a);
        if (mag >= prev) break;
        prev = mag;
        sum += (m % 2 == 0 ? a : -a);
        if (mag < 1e-18) break;
    }
    return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace

double j0(double x) {
    x = std::abs(x);
    return (x <= kSeriesLimit) ? series_j0(x) : asymptotic_j(0.0, x);
}

double j1(double x) {
    const double ax = std::abs(x);
    const double v = (ax <= kSeriesLimit) ? series_j1(ax) : asymptotic_j(1.0, ax);
    return (x < 0.0) ? -v : v;
}

double i0(double x) {
    x = std::abs(x);
    if (x <= kSeriesLimit) return series_i0(x);
    return asymptotic_ie(0.0, x) * std::exp(x);
}

double i1(double x) {
    const double ax = std::abs(x);
    const double v =
        (ax <= kSeriesLimit) ? series_i1(ax) : asymptotic_ie(1.0, ax) * std::exp(ax);
    return (x < 0.0) ? -v : v;
}

double i0e(double x) {
    x = std::abs(x);
    if (x <= kSeriesLimit) return series_i0(x) * std::exp(-x);
    return asymptotic_ie(0.0, x);
}

double i1e(double x) {
    const double ax = std::abs(x);
    const double v = (ax <= kSeriesLimit) ? series_i1(ax) * std::exp(-ax)
                                          : asymptotic_ie(1.0, ax);
    return (x < 0.0) ? -v : v;
}

}  // namespace piezotx::bessel
