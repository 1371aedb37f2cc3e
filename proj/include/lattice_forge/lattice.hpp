#pragma once

// Two-dimensional Bravais lattices: the (x, y) normal form over the
// fundamental domain D, Lagrange-Gauss reduction, duality, distances and
// enumeration of lattice vectors inside a disk.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "lattice_forge/errors.hpp"

namespace lattice_forge {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Generators u1, u2 of L = Z u1 + Z u2.
struct Basis2D {
    Vec2 u1;
    Vec2 u2;

    double determinant() const { return cross(u1, u2); }
    double covolume() const { return std::abs(determinant()); }

    Vec2 at(std::int64_t m, std::int64_t n) const {
        return static_cast<double>(m) * u1 + static_cast<double>(n) * u2;
    }

    /// Gram matrix entries (g11, g12, g22).
    std::array<double, 3> gram() const { return {norm2(u1), dot(u1, u2), norm2(u2)}; }

    /// Basis of the dual lattice {p : p.x in Z for all x in L}: the rows of B^{-1}.
    Basis2D dual() const {
        const double det = determinant();
        return {{u2.y / det, -u2.x / det}, {-u1.y / det, u1.x / det}};
    }
};

/// A Bravais lattice up to isometry: a point of D plus its covolume.
struct LatticeParams {
    double x = 0.0;
    double y = 1.0;
    double scale = 1.0;

    friend bool operator==(const LatticeParams&, const LatticeParams&) = default;
};

inline constexpr double kDomainTolerance = 1e-12;
inline constexpr double kDegenerateTolerance = 1e-12;

inline bool in_fundamental_domain(double x, double y, double tol = kDomainTolerance) {
    return std::isfinite(x) && std::isfinite(y) && x >= -tol && x <= 0.5 + tol && y > 0.0 &&
           x * x + y * y >= 1.0 - tol;
}

inline bool in_fundamental_domain(const LatticeParams& p, double tol = kDomainTolerance) {
    return in_fundamental_domain(p.x, p.y, tol) && p.scale > 0.0;
}

/// Basis ((1/sqrt y, 0), (x/sqrt y, sqrt y)) scaled to covolume `scale`, for any
/// point of the upper half-plane. Used by evaluators that probe (x, y) slightly
/// outside D, where the lattice is still well defined.
inline Basis2D half_plane_basis(double x, double y, double scale = 1.0) {
    if (!(y > 0.0) || !(scale > 0.0) || !std::isfinite(x)) {
        throw DomainError("half_plane_basis: need y > 0 and scale > 0, got x=" + std::to_string(x) +
                          " y=" + std::to_string(y) + " scale=" + std::to_string(scale));
    }
    const double sy = std::sqrt(y);
    const double s = std::sqrt(scale);
    return {{s / sy, 0.0}, {s * x / sy, s * sy}};
}

/// Unit-density basis of the lattice with parameters (x, y) in D.
inline Basis2D from_params(double x, double y) {
    if (!in_fundamental_domain(x, y)) {
        throw DomainError("from_params: (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") is not in the fundamental domain D");
    }
    return half_plane_basis(x, y);
}

inline Basis2D to_basis(const LatticeParams& p) { return half_plane_basis(p.x, p.y, p.scale); }

inline LatticeParams triangular_lattice() {
    return {0.5, std::numbers::sqrt3 / 2.0, 1.0};
}

inline LatticeParams square_lattice() { return {0.0, 1.0, 1.0}; }

/// Result of reducing an arbitrary basis: the normal form plus the orthogonal map
/// Q (rotation by `rotation`, preceded by the reflection y -> -y when `reflected`)
/// such that sqrt(scale) * Q * from_params(x, y) generates the input lattice.
struct Reduction {
    LatticeParams params;
    double rotation = 0.0;
    bool reflected = false;
};

namespace detail {

struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;  // [[a b] [c d]]

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 then(const Mat2& next) const {  // next * this
        return {next.a * a + next.b * c, next.a * b + next.b * d, next.c * a + next.d * c,
                next.c * b + next.d * d};
    }
};

/// Lagrange-Gauss reduction: returns (a, b) with |a| <= |b| and |a.b| <= |a|^2/2.
inline std::pair<Vec2, Vec2> lagrange_gauss(Vec2 a, Vec2 b) {
    double na = norm2(a);
    double nb = norm2(b);
    if (nb < na) {
        std::swap(a, b);
        std::swap(na, nb);
    }
    for (int iter = 0; iter < 10000; ++iter) {
        const double q = std::round(dot(a, b) / na);
        if (q != 0.0) {
            b = b - q * a;
            nb = norm2(b);
        }
        if (nb < na * (1.0 - 1e-15)) {
            std::swap(a, b);
            std::swap(na, nb);
            continue;
        }
        return {a, b};
    }
    throw ConvergenceError("lagrange_gauss: reduction did not terminate");
}

}  // namespace detail

inline Reduction reduce(const Basis2D& basis) {
    const double det = basis.determinant();
    const double scale_ref = norm(basis.u1) * norm(basis.u2);
    if (!std::isfinite(det) || !(scale_ref > 0.0) || std::abs(det) < kDegenerateTolerance * scale_ref) {
        throw DegenerateBasisError("reduce: basis is degenerate (|det| below 1e-12 relative)");
    }

    auto [a, b] = detail::lagrange_gauss(basis.u1, basis.u2);

    // Track M with M*a = (|a|, 0) and M*b in the closed upper-right quadrant.
    const double theta = std::atan2(a.y, a.x);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    detail::Mat2 m{ct, st, -st, ct};
    Vec2 ra = m.apply(a);
    Vec2 rb = m.apply(b);
    if (rb.y < 0.0) {
        m = m.then({1.0, 0.0, 0.0, -1.0});
        rb.y = -rb.y;
    }
    if (rb.x < 0.0) {
        // Reflect x -> -x and replace a by -a so that it points along +x again.
        m = m.then({-1.0, 0.0, 0.0, 1.0});
        rb.x = -rb.x;
    }

    const double la = std::abs(ra.x);
    const double covol = std::abs(det);
    const double y = covol / (la * la);  // (sqrt(y))^2 with sqrt(y) = d / sqrt(covol)
    double x = rb.x / la;
    x = std::clamp(x, 0.0, 0.5);

    // Q = M^{-1} = M^T; decompose Q = R(phi) * diag(1, s).
    const detail::Mat2 q{m.a, m.c, m.b, m.d};
    const bool reflected = (q.a * q.d - q.b * q.c) < 0.0;
    const double phi = std::atan2(q.c, q.a);
    return {{x, y, covol}, phi, reflected};
}

/// Basis generating the same lattice as the input of `reduce`.
inline Basis2D reconstruct(const Reduction& r) {
    const Basis2D base = to_basis(r.params);
    const double c = std::cos(r.rotation);
    const double s = std::sin(r.rotation);
    auto q = [&](Vec2 v) {
        if (r.reflected) v.y = -v.y;
        return Vec2{c * v.x - s * v.y, s * v.x + c * v.y};
    };
    return {q(base.u1), q(base.u2)};
}

/// Normal form of the dual lattice; unit density maps to unit density.
inline LatticeParams dual(const LatticeParams& p) { return reduce(to_basis(p).dual()).params; }

/// Distance on D identifying x with x + k and with -x + k (lattice isometries).
inline double metric(const LatticeParams& l1, const LatticeParams& l2) {
    double best = std::abs(l1.x - l2.x);
    for (int k = -2; k <= 2; ++k) {
        best = std::min(best, std::abs(l1.x - l2.x - k));
        best = std::min(best, std::abs(l1.x + l2.x - k));
    }
    return std::hypot(best, l1.y - l2.y);
}

/// Distance with the period-1/2 identification in x, exactly as originally stated.
/// Note that it puts (0, 1) and (1/2, 1) at distance 0 although those lattices differ.
inline double metric_paper(const LatticeParams& l1, const LatticeParams& l2) {
    const double dx = l1.x - l2.x;
    const double k = std::round(2.0 * dx);
    double best = std::abs(dx);
    for (double kk = k - 1.0; kk <= k + 1.0; kk += 1.0) best = std::min(best, std::abs(dx - 0.5 * kk));
    return std::hypot(best, l1.y - l2.y);
}

struct LatticePoint {
    Vec2 p;
    std::int64_t m = 0;
    std::int64_t n = 0;
    double norm2 = 0.0;
};

/// Nonzero lattice vectors with |p| <= cutoff, sorted by (|p|^2, m, n).
struct ShellEnumeration {
    std::vector<LatticePoint> points;
    double cutoff = 0.0;

    std::size_t count() const { return points.size(); }
};

inline constexpr std::size_t kDefaultPointCap = 10'000'000;

/// Length of the shortest nonzero vector.
inline double shortest_vector(const Basis2D& basis) {
    auto [a, b] = detail::lagrange_gauss(basis.u1, basis.u2);
    (void)b;
    return norm(a);
}

/// Covering radius: the circumradius of the acute triangle (0, a, b) spanned by
/// a reduced basis. The Voronoi cell lies in the disk of this radius, so a disk
/// of radius r around any centre holds at most pi (r + mu)^2 / V lattice points.
inline double covering_radius(const Basis2D& basis) {
    auto [a, b] = detail::lagrange_gauss(basis.u1, basis.u2);
    if (dot(a, b) < 0.0) b = -b;
    const double twice_area = std::abs(cross(a, b));
    if (!(twice_area > 0.0)) throw DegenerateBasisError("covering_radius: degenerate basis");
    return norm(a) * norm(b) * norm(a - b) / (2.0 * twice_area);
}

inline ShellEnumeration enumerate_shells(const Basis2D& basis, double cutoff,
                                         std::size_t cap = kDefaultPointCap) {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        throw DomainError("enumerate_shells: cutoff must be positive and finite");
    }
    const double covol = basis.covolume();
    if (!(covol > 0.0)) throw DegenerateBasisError("enumerate_shells: degenerate basis");

    // |m| = |p . u1*| <= R |u1*|, likewise for n.
    const Basis2D d = basis.dual();
    const double slack = 1e-9 * (1.0 + cutoff);
    const double mmax_f = std::floor(cutoff * norm(d.u1) + slack);
    const double nmax_f = std::floor(cutoff * norm(d.u2) + slack);
    const double mu = covering_radius(basis);
    const double estimate = std::numbers::pi * (cutoff + mu) * (cutoff + mu) / covol;
    const double box = (2.0 * mmax_f + 1.0) * (2.0 * nmax_f + 1.0);
    if (estimate > static_cast<double>(cap) || box > 16.0 * static_cast<double>(cap)) {
        throw ResourceError("enumerate_shells: cutoff " + std::to_string(cutoff) + " needs about " +
                            std::to_string(static_cast<long long>(estimate)) +
                            " points, above the cap of " + std::to_string(cap));
    }
    const auto mmax = static_cast<std::int64_t>(mmax_f);
    const auto nmax = static_cast<std::int64_t>(nmax_f);

    ShellEnumeration out;
    out.cutoff = cutoff;
    out.points.reserve(static_cast<std::size_t>(estimate) + 8);
    const double r2 = cutoff * cutoff * (1.0 + 1e-14);
    for (std::int64_t n = -nmax; n <= nmax; ++n) {
        for (std::int64_t m = -mmax; m <= mmax; ++m) {
            if (m == 0 && n == 0) continue;
            const Vec2 p = basis.at(m, n);
            const double q = norm2(p);
            if (q <= r2) out.points.push_back({p, m, n, q});
        }
    }
    std::sort(out.points.begin(), out.points.end(), [](const LatticePoint& a, const LatticePoint& b) {
        if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
        if (a.m != b.m) return a.m < b.m;
        return a.n < b.n;
    });
    return out;
}

inline ShellEnumeration enumerate_shells(const LatticeParams& params, double cutoff,
                                         std::size_t cap = kDefaultPointCap) {
    return enumerate_shells(to_basis(params), cutoff, cap);
}

}  // namespace lattice_forge
