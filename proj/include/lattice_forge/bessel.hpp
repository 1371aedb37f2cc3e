#pragma once

// Bessel functions of the first kind J_0, J_1, J_2 for real arguments.
//
// Small arguments use the ascending power series summed in extended precision;
// large arguments use Hankel's asymptotic expansion, truncated at its smallest
// term. At the switch point x = 16 both branches are accurate to ~1e-15.

#include <cmath>
#include <numbers>
#include <string>

#include "lattice_forge/errors.hpp"

namespace lattice_forge {

inline constexpr double kBesselSwitch = 16.0;

namespace detail {

inline double bessel_series(int n, double x) {
    const long double h = 0.5L * static_cast<long double>(x);
    const long double h2 = h * h;
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k) term *= h / static_cast<long double>(k);
    long double sum = term;
    for (int m = 1; m < 120; ++m) {
        term *= -h2 / (static_cast<long double>(m) * static_cast<long double>(m + n));
        sum += term;
        if (m > h && std::fabs(term) <= 1e-22L * (1.0L + std::fabs(sum))) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_asymptotic(int n, double x) {
    const long double mu = 4.0L * n * n;
    const long double inv8x = 1.0L / (8.0L * static_cast<long double>(x));
    long double p = 1.0L;
    long double q = 0.0L;
    long double a = 1.0L;  // a_k = prod_{j<=k} (mu - (2j-1)^2) / (k! (8x)^k)
    long double last = 1.0L;
    for (int k = 1; k < 80; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        const long double next = a * (mu - odd * odd) * inv8x / static_cast<long double>(k);
        if (std::fabs(next) > last) break;  // asymptotic series started to diverge
        a = next;
        last = std::fabs(a);
        // Terms alternate between Q (odd k) and P (even k) with signs (-1)^{floor(k/2)}.
        const long double sign = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
        if (k % 2 == 1) {
            q += sign * a;
        } else {
            p += sign * a;
        }
        if (last < 1e-20L) break;
    }
    const long double chi =
        static_cast<long double>(x) - (0.5L * n + 0.25L) * std::numbers::pi_v<long double>;
    const long double amp = std::sqrt(2.0L / (std::numbers::pi_v<long double> * x));
    return static_cast<double>(amp * (p * std::cos(chi) - q * std::sin(chi)));
}

}  // namespace detail

/// J_n(x) for n in {0, 1, 2}; absolute accuracy 1e-12 or better. Negative
/// arguments use the parity J_n(-x) = (-1)^n J_n(x).
inline double bessel_j(int n, double x) {
    if (n < 0 || n > 2) throw DomainError("bessel_j: order must be 0, 1 or 2, got " + std::to_string(n));
    if (std::isnan(x)) return x;
    if (x < 0.0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(n, -x);
    if (x <= kBesselSwitch) return detail::bessel_series(n, x);
    return detail::bessel_asymptotic(n, x);
}

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }
inline double bessel_j2(double x) { return bessel_j(2, x); }

/// 2 J_1(x) / x, continuous at 0 with value 1.
inline double bessel_jinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 8.0;
    return 2.0 * bessel_j1(x) / x;
}

}  // namespace lattice_forge
