#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lattice_forge/errors.hpp"

namespace lattice_forge {

/// A quadrature node: position and (nonnegative) weight.
struct Node {
    double position = 0.0;
    double weight = 0.0;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline std::vector<Node> gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    std::vector<Node> rule(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        long double z = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1.0L;
            long double p1 = 0.0L;
            for (int j = 1; j <= n; ++j) {
                const long double p2 = p1;
                p1 = p0;
                p0 = ((2.0L * j - 1.0L) * z * p1 - (j - 1.0L) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0L);
            const long double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        const double w = static_cast<double>(2.0L / ((1.0L - z * z) * dp * dp));
        rule[static_cast<std::size_t>(i)] = {-static_cast<double>(z), w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {static_cast<double>(z), w};
    }
    return rule;
}

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
inline std::vector<Node> composite_gauss_legendre(double a, double b, int panels, int order) {
    const auto base = gauss_legendre(order);
    std::vector<Node> out;
    out.reserve(static_cast<std::size_t>(panels * order));
    const double width = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * width;
        const double mid = lo + 0.5 * width;
        for (const Node& nd : base) out.push_back({mid + 0.5 * width * nd.position, 0.5 * width * nd.weight});
    }
    return out;
}

struct IntegrationResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (positive half).
inline constexpr std::array<double, 8> kKronrodX = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrodW[7];
    double gauss = fc * kGaussW[3];
    double absolute = std::abs(fc) * kKronrodW[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kKronrodX[static_cast<std::size_t>(j)];
        const double lo = f(c - dx);
        const double hi = f(c + dx);
        kronrod += kKronrodW[static_cast<std::size_t>(j)] * (lo + hi);
        absolute += kKronrodW[static_cast<std::size_t>(j)] * (std::abs(lo) + std::abs(hi));
        if (j % 2 == 1) gauss += kGaussW[static_cast<std::size_t>(j / 2)] * (lo + hi);
    }
    // The difference estimate cannot resolve below roundoff in the panel sum.
    const double err = std::abs((kronrod - gauss) * h);
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * absolute * std::abs(h);
    return {kronrod * h, err <= floor ? 0.0 : err};
}

template <class F>
void gk_recurse(F& f, double a, double b, double abs_tol, int depth, IntegrationResult& acc) {
    auto [value, err] = gk15(f, a, b);
    acc.evaluations += 15;
    if (err <= abs_tol || depth <= 0 || (b - a) < 1e-14 * (std::abs(a) + std::abs(b))) {
        acc.value += value;
        acc.error += err;
        return;
    }
    const double mid = 0.5 * (a + b);
    gk_recurse(f, a, mid, 0.5 * abs_tol, depth - 1, acc);
    gk_recurse(f, mid, b, 0.5 * abs_tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. The interval is
/// first split into `initial_panels` pieces so that oscillatory integrands are
/// resolved before error estimates are trusted.
template <class F>
IntegrationResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                                     int initial_panels = 16, int max_depth = 20) {
    // A coarse pass fixes the scale for the relative tolerance.
    double scale = 0.0;
    {
        const double w = (b - a) / initial_panels;
        for (int k = 0; k < initial_panels; ++k) {
            scale += std::abs(detail::gk15(f, a + k * w, a + (k + 1) * w).first);
        }
    }
    const double tol = std::max(abs_tol, rel_tol * scale);
    IntegrationResult acc;
    const double w = (b - a) / initial_panels;
    for (int k = 0; k < initial_panels; ++k) {
        detail::gk_recurse(f, a + k * w, a + (k + 1) * w, tol / initial_panels, max_depth, acc);
    }
    acc.evaluations += 15 * initial_panels;
    return acc;
}

}  // namespace lattice_forge
