#pragma once

// Truncated sums of radial summands over a lattice with certified tail bounds.
//
// A summand is controlled by a radial majorant M(r) >= |h(p)| for |p| = r,
// written as a finite combination of c r^k e^{-t r^2} and C (1+r)^{-(2+eta)}.
// With N(r) <= pi (r + mu)^2 / V points in a disk of radius r (mu = covering
// radius, V = covolume), Abel summation gives for decreasing M
//
//   sum_{|p| > R} M(|p|) <= (pi / V) [ (R + mu)^2 M(R) + int_R^inf 2 (r + mu) M(r) dr ].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice.hpp"

namespace lattice_forge {

/// coeff * r^power * exp(-rate r^2)
struct GaussianTerm {
    double coeff = 0.0;
    int power = 0;
    double rate = 1.0;
};

/// coeff * (1 + r)^{-(2 + eta)}
struct PowerTerm {
    double coeff = 0.0;
    double eta = 1.0;
};

struct RadialMajorant {
    std::vector<GaussianTerm> gaussian;
    std::vector<PowerTerm> power;

    double operator()(double r) const {
        double s = 0.0;
        for (const auto& g : gaussian) s += std::abs(g.coeff) * std::pow(r, g.power) * std::exp(-g.rate * r * r);
        for (const auto& p : power) s += std::abs(p.coeff) * std::pow(1.0 + r, -(2.0 + p.eta));
        return s;
    }

    bool empty() const { return gaussian.empty() && power.empty(); }

    /// Majorant of r^k * h given a majorant of h (Gaussian terms only).
    RadialMajorant times_power(int k, double factor = 1.0) const {
        if (!power.empty()) {
            throw UnsupportedError("RadialMajorant::times_power: power-law terms cannot absorb r^k");
        }
        RadialMajorant out;
        out.gaussian.reserve(gaussian.size());
        for (const auto& g : gaussian) out.gaussian.push_back({g.coeff * factor, g.power + k, g.rate});
        return out;
    }

    RadialMajorant& operator+=(const RadialMajorant& other) {
        gaussian.insert(gaussian.end(), other.gaussian.begin(), other.gaussian.end());
        power.insert(power.end(), other.power.begin(), other.power.end());
        return *this;
    }

    friend RadialMajorant operator+(RadialMajorant a, const RadialMajorant& b) { return a += b; }

    /// Radius beyond which every term is nonincreasing.
    double monotone_from() const {
        double r = 0.0;
        for (const auto& g : gaussian) {
            if (g.power > 0 && g.coeff != 0.0) r = std::max(r, std::sqrt(g.power / (2.0 * g.rate)));
        }
        return r;
    }
};

namespace detail {

/// int_R^inf r^j e^{-t r^2} dr for j >= 0.
inline double gaussian_moment_tail(int j, double R, double t) {
    const double e = std::exp(-t * R * R);
    double im2 = 0.5 * std::sqrt(std::numbers::pi / t) * std::erfc(std::sqrt(t) * R);  // j = 0
    double im1 = e / (2.0 * t);                                                        // j = 1
    if (j == 0) return im2;
    if (j == 1) return im1;
    double cur = 0.0;
    for (int k = 2; k <= j; ++k) {
        cur = std::pow(R, k - 1) * e / (2.0 * t) + (k - 1) / (2.0 * t) * im2;
        im2 = im1;
        im1 = cur;
    }
    return cur;
}

}  // namespace detail

/// Upper bound on sum over lattice points with |p| > R of M(|p|).
inline double tail_bound(const RadialMajorant& m, double R, double covolume, double covering_radius) {
    if (m.empty()) return 0.0;
    if (R < m.monotone_from()) return std::numeric_limits<double>::infinity();
    const double rho = covering_radius;
    double integral = 0.0;
    for (const auto& g : m.gaussian) {
        if (g.coeff == 0.0) continue;
        const double c = std::abs(g.coeff);
        integral += 2.0 * c *
                    (detail::gaussian_moment_tail(g.power + 1, R, g.rate) +
                     rho * detail::gaussian_moment_tail(g.power, R, g.rate));
    }
    for (const auto& p : m.power) {
        if (p.coeff == 0.0) continue;
        const double c = std::abs(p.coeff);
        const double k = 2.0 + p.eta;
        integral += 2.0 * c *
                    (std::pow(1.0 + R, 2.0 - k) / (k - 2.0) + (rho - 1.0) * std::pow(1.0 + R, 1.0 - k) / (k - 1.0));
    }
    const double bound = std::numbers::pi / covolume * ((R + rho) * (R + rho) * m(R) + integral);
    return std::max(bound, 0.0);
}

/// Smallest R >= r_min (to bisection accuracy) with tail_bound(R) <= target.
inline double cutoff_for(const RadialMajorant& m, double target, double covolume, double covering_radius,
                         double r_min) {
    if (!(target > 0.0)) throw DomainError("cutoff_for: target must be positive");
    double lo = std::max(r_min, m.monotone_from());
    if (tail_bound(m, lo, covolume, covering_radius) <= target) return lo;
    double hi = std::max(2.0 * lo, 1.0);
    int doublings = 0;
    while (tail_bound(m, hi, covolume, covering_radius) > target) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 60) {
            throw ConvergenceError("cutoff_for: tail bound does not reach " + std::to_string(target));
        }
    }
    for (int it = 0; it < 50 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail_bound(m, mid, covolume, covering_radius) <= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

struct Tolerance {
    double rtol = 1e-12;
    double atol = 0.0;
};

struct TruncatedSum {
    double value = 0.0;
    double cutoff = 0.0;
    double tail_bound = 0.0;
    std::size_t terms = 0;
};

namespace detail {

/// Points above this estimate are summed row by row instead of being stored and sorted.
inline constexpr double kSortedSumLimit = 4e6;

}  // namespace detail

/// Streaming keeps memory flat, so the default cap only bounds running time.
inline constexpr std::size_t kSummationPointCap = 200'000'000;

namespace detail {

/// Compensated sum of h over nonzero points with |p| <= R, one row of n at a time.
template <class Summand>
double streamed_sum(const Basis2D& basis, Summand& h, double R, std::size_t& count) {
    const double r2 = R * R * (1.0 + 1e-14);
    const double a = norm2(basis.u1);
    const double b = dot(basis.u1, basis.u2);
    const double c = norm2(basis.u2);
    const auto nmax = static_cast<std::int64_t>(std::floor(R * norm(basis.dual().u2) + 1e-9 * (1.0 + R)));
    double sum = 0.0;
    double comp = 0.0;
    for (std::int64_t n = -nmax; n <= nmax; ++n) {
        // |m u1 + n u2|^2 = a m^2 + 2 b n m + c n^2 <= R^2
        const double nd = static_cast<double>(n);
        const double disc = b * b * nd * nd - a * (c * nd * nd - r2);
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        const auto m_lo = static_cast<std::int64_t>(std::floor((-b * nd - root) / a)) - 1;
        const auto m_hi = static_cast<std::int64_t>(std::ceil((-b * nd + root) / a)) + 1;
        for (std::int64_t m = m_lo; m <= m_hi; ++m) {
            if (m == 0 && n == 0) continue;
            const Vec2 p = basis.at(m, n);
            const double q = norm2(p);
            if (q > r2) continue;
            ++count;
            const double v = h(LatticePoint{p, m, n, q});
            const double t = sum + v;
            comp += (std::abs(sum) >= std::abs(v)) ? (sum - t) + v : (v - t) + sum;
            sum = t;
        }
    }
    return sum + comp;
}

}  // namespace detail

/// Sum of h(point) over nonzero lattice points, truncated so that the certified
/// tail is at most max(rtol |value|, atol). `h` receives a LatticePoint.
/// Small cutoffs sum sorted shells from the outside in; large ones stream rows
/// with compensated summation. ResourceError if more than `cap` points are needed.
template <class Summand>
TruncatedSum lattice_sum(const Basis2D& basis, Summand&& h, const RadialMajorant& majorant, Tolerance tol,
                         std::size_t cap = kSummationPointCap) {
    const double covol = basis.covolume();
    const double lambda1 = shortest_vector(basis);
    const double rho = covering_radius(basis);
    if (majorant.empty()) return {0.0, lambda1, 0.0, 0};

    const double floor_abs = std::max(tol.atol, std::numeric_limits<double>::min());
    double target = std::max(tol.rtol * majorant(lambda1), floor_abs);
    for (int attempt = 0; attempt < 12; ++attempt) {
        const double R = cutoff_for(majorant, target, covol, rho, lambda1);
        const double estimate = std::numbers::pi * (R + rho) * (R + rho) / covol;
        double sum = 0.0;
        std::size_t terms = 0;
        if (estimate <= detail::kSortedSumLimit || estimate <= 1.0) {
            const ShellEnumeration shells = enumerate_shells(basis, R, cap);
            for (auto it = shells.points.rbegin(); it != shells.points.rend(); ++it) sum += h(*it);
            terms = shells.count();
        } else {
            if (estimate > static_cast<double>(cap)) {
                throw ResourceError("lattice_sum: cutoff " + std::to_string(R) + " needs about " +
                                    std::to_string(static_cast<long long>(estimate)) +
                                    " points, above the cap of " + std::to_string(cap));
            }
            sum = detail::streamed_sum(basis, h, R, terms);
        }
        const double tail = tail_bound(majorant, R, covol, rho);
        const double allowed = std::max(tol.rtol * std::abs(sum), tol.atol);
        if (tail <= allowed) return {sum, R, tail, terms};
        target = std::max(0.5 * allowed, floor_abs);
        if (tail <= floor_abs) return {sum, R, tail, terms};
    }
    throw ConvergenceError("lattice_sum: could not certify the truncation tail");
}

}  // namespace lattice_forge
