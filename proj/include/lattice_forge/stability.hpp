#pragma once

// Local stability of the triangular lattice Lambda. For a radial summand
// h(p) = H(|p|^2), Lambda is a critical point of E_h and its Hessian in (x, y)
// is T_h times the identity, with
//
//   T_h = 4/sqrt3 sum' n^2 H'(2/sqrt3 (m^2+mn+n^2)) + 4/3 sum' n^4 H''(2/sqrt3 (m^2+mn+n^2)).
//
// For diffuse particles H_eps = Phi G_eps^2 with Phi = f^ and G_eps(r) = g(eps sqrt r).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "lattice_forge/energy.hpp"
#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice.hpp"
#include "lattice_forge/lattice_sum.hpp"
#include "lattice_forge/measure.hpp"
#include "lattice_forge/parallel.hpp"
#include "lattice_forge/potential.hpp"

namespace lattice_forge {

enum class Classification { stable, unstable, marginal };

inline std::string to_string(Classification c) {
    switch (c) {
        case Classification::stable: return "stable";
        case Classification::unstable: return "unstable";
        case Classification::marginal: return "marginal";
    }
    return "unknown";
}

inline constexpr double kClassificationTolerance = 1e-9;

inline Classification classify(double t, double tol = kClassificationTolerance) {
    if (t > tol) return Classification::stable;
    if (t < -tol) return Classification::unstable;
    return Classification::marginal;
}

using Vector2 = std::array<double, 2>;
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// T for derivatives F1 = F', F2 = F'' of a radial summand F(|p|^2). `m1` and
/// `m2` bound |F1(|p|^2)| and |F2(|p|^2)| as functions of |p| and certify the tail.
inline double t_coefficient(const std::function<double(double)>& f1, const std::function<double(double)>& f2,
                            const RadialMajorant& m1, const RadialMajorant& m2, Tolerance tol = {1e-13, 1e-15}) {
    constexpr double c2 = 4.0 / std::numbers::sqrt3;
    constexpr double c4 = 4.0 / 3.0;
    // n^2 <= (2/sqrt3) |p|^2 and n^4 <= (4/3) |p|^4 on Lambda.
    RadialMajorant majorant = m1.times_power(2, c2 * 2.0 / std::numbers::sqrt3);
    majorant += m2.times_power(4, c4 * 4.0 / 3.0);

    const LatticeParams tri = triangular_lattice();
    const Basis2D basis = half_plane_basis(tri.x, tri.y);
    std::int64_t last_key = -1;
    double d1 = 0.0;
    double d2 = 0.0;
    auto summand = [&](const LatticePoint& p) {
        const std::int64_t key = p.m * p.m + p.m * p.n + p.n * p.n;
        if (key != last_key) {
            last_key = key;
            const double r = 2.0 / std::numbers::sqrt3 * static_cast<double>(key);
            d1 = f1(r);
            d2 = f2(r);
        }
        const double n2 = static_cast<double>(p.n * p.n);
        return c2 * n2 * d1 + c4 * n2 * n2 * d2;
    };
    return lattice_sum(basis, summand, majorant, tol).value;
}

/// T_f for a point potential f of class F.
inline double t_coefficient(const RadialPotential& p, Tolerance tol = {1e-13, 1e-15}) {
    return t_coefficient([&](double r) { return p.derivative(r, 1); }, [&](double r) { return p.derivative(r, 2); },
                         p.majorant(1), p.majorant(2), tol);
}

/// H_eps = Phi G_eps^2 and its first two derivatives at r = |p|^2.
struct HDerivatives {
    double h0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

/// Stability analysis at Lambda for a fixed (potential, measure) pair as a
/// function of the dilation eps of the measure.
class DiffuseStability {
public:
    DiffuseStability(const RadialPotential& potential, RadialMeasure measure)
        : phi_(fourier(potential)), measure_(std::move(measure)), description_(potential.description()) {
        m1_ = measure_.moment(1);
        m2_ = measure_.moment(2);
        if (!std::isfinite(m1_) || !std::isfinite(m2_)) {
            throw MomentError("DiffuseStability: measure has an infinite radial moment");
        }
    }

    const RadialPotential& phi() const { return phi_; }
    /// Description of the potential f itself (phi is its transform).
    const std::string& potential_description() const { return description_; }
    const RadialMeasure& measure() const { return measure_; }

    HDerivatives h_derivatives(double eps, double r) const {
        if (!(r > 0.0)) throw DomainError("diffuse_h_derivatives: r must be positive");
        const double p0 = phi_.derivative(r, 0);
        const double p1 = phi_.derivative(r, 1);
        const double p2 = phi_.derivative(r, 2);
        if (eps == 0.0 || measure_.kind() == MeasureKind::dirac) return {p0, p1, p2};

        const HankelMoments a = hankel_moments(measure_, eps, r);
        const double pi = std::numbers::pi;
        const double sr = std::sqrt(r);
        const double g2 = a.a0 * a.a0;
        const double g2d1 = -2.0 * pi * eps / sr * a.a1 * a.a0;
        const double g2d2 = pi * eps / (r * sr) * a.a0 * a.a1 + 2.0 * pi * pi * eps * eps / r * a.a1 * a.a1 +
                            pi * pi * eps * eps / r * a.a0 * a.a2;
        return {p0 * g2, p1 * g2 + p0 * g2d1, p2 * g2 + 2.0 * p1 * g2d1 + p0 * g2d2};
    }

    /// Majorants of |H'| and |H''| at |p|, valid for |p| >= 1 (so 1/sqrt r <= 1).
    std::pair<RadialMajorant, RadialMajorant> majorants(double eps) const {
        const double pi = std::numbers::pi;
        const RadialMajorant f0 = phi_.majorant(0);
        const RadialMajorant f1 = phi_.majorant(1);
        const RadialMajorant f2 = phi_.majorant(2);
        if (eps == 0.0 || measure_.kind() == MeasureKind::dirac) return {f1, f2};
        const double b1 = 2.0 * pi * eps * m1_;
        const double b2 = pi * eps * m1_ + 2.0 * pi * pi * eps * eps * (m1_ * m1_ + m2_);
        RadialMajorant h1 = f1 + f0.times_power(0, b1);
        RadialMajorant h2 = f2 + f1.times_power(0, 2.0 * b1) + f0.times_power(0, b2);
        return {h1, h2};
    }

    double t_coefficient(double eps, Tolerance tol = {1e-13, 1e-15}) const {
        auto [m1, m2] = majorants(eps);
        return lattice_forge::t_coefficient([&](double r) { return h_derivatives(eps, r).h1; },
                                            [&](double r) { return h_derivatives(eps, r).h2; }, m1, m2, tol);
    }

    /// E_{h_eps}[L(x, y)] for any (x, y) in the upper half-plane.
    double energy(double eps, double x, double y) const {
        const RadialMeasure dil = measure_.dilated(eps);
        return fourier_side_point_energy(phi_, dil, half_plane_basis(x, y));
    }

private:
    RadialPotential phi_;
    RadialMeasure measure_;
    std::string description_;
    double m1_ = 0.0;
    double m2_ = 0.0;
};

inline HDerivatives diffuse_h_derivatives(const RadialPotential& p, const RadialMeasure& mu, double eps, double r) {
    return DiffuseStability(p, mu).h_derivatives(eps, r);
}

struct FDSteps {
    double gradient = 1e-5;
    double hessian = 1e-4;
};

struct FDResult {
    Vector2 grad{};
    Matrix2 hessian{};
};

/// Fourth-order central differences of E(x, y), steps scaled by (1 + |y|).
/// E is evaluated on the analytic extension off D when the stencil crosses its
/// boundary; one-sided differences are used only when the stencil would reach y <= 0.
inline FDResult fd_gradient_hessian(const std::function<double(double, double)>& e, double x, double y,
                                    FDSteps steps = {}) {
    if (!(y > 0.0)) throw DomainError("fd_gradient_hessian: y must be positive");
    const double hg = steps.gradient * (1.0 + std::abs(y));
    const double hh = steps.hessian * (1.0 + std::abs(y));
    FDResult out;
    auto f = [&](double dx, double dy) { return e(x + dx, y + dy); };

    // Stencils are grouped into differences so that constants cancel exactly.
    const double f00 = f(0, 0);
    auto d1 = [](double m2, double m1, double p1, double p2, double h) {
        return (8 * (p1 - m1) - (p2 - m2)) / (12 * h);
    };
    auto d2 = [f00](double m2, double m1, double p1, double p2, double h) {
        return (16 * ((p1 - f00) + (m1 - f00)) - ((p2 - f00) + (m2 - f00))) / (12 * h * h);
    };
    out.grad[0] = d1(f(-2 * hg, 0), f(-hg, 0), f(hg, 0), f(2 * hg, 0), hg);
    out.hessian[0][0] = d2(f(-2 * hh, 0), f(-hh, 0), f(hh, 0), f(2 * hh, 0), hh);

    if (y - 2.0 * std::max(hg, hh) > 0.0) {
        out.grad[1] = d1(f(0, -2 * hg), f(0, -hg), f(0, hg), f(0, 2 * hg), hg);
        out.hessian[1][1] = d2(f(0, -2 * hh), f(0, -hh), f(0, hh), f(0, 2 * hh), hh);
        const double h = hh;
        auto g = [&](int i, int j) { return f(i * h, j * h); };
        out.hessian[0][1] = (8 * ((g(1, -2) - g(-1, -2)) + (g(2, -1) - g(-2, -1)) + (g(-2, 1) - g(2, 1)) +
                                  (g(-1, 2) - g(1, 2))) -
                             ((g(2, -2) - g(2, 2)) + (g(-2, 2) - g(-2, -2))) +
                             64 * ((g(1, 1) - g(1, -1)) + (g(-1, -1) - g(-1, 1)))) /
                            (144 * h * h);
    } else {
        // Forward stencils in y.
        out.grad[1] = (4 * (f(0, hg) - f00) - (f(0, 2 * hg) - f00)) / (2 * hg);
        out.hessian[1][1] =
            (-5 * (f(0, hh) - f00) + 4 * (f(0, 2 * hh) - f00) - (f(0, 3 * hh) - f00)) / (hh * hh);
        out.hessian[0][1] = ((f(hh, hh) - f(-hh, hh)) - (f(hh, 0) - f(-hh, 0))) / (2 * hh * hh);
    }
    out.hessian[1][0] = out.hessian[0][1];
    return out;
}

inline FDResult fd_gradient_hessian(const std::function<double(double, double)>& e, const LatticeParams& at,
                                    FDSteps steps = {}) {
    return fd_gradient_hessian(e, at.x, at.y, steps);
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline Vector2 symmetric_eigenvalues(const Matrix2& m) {
    const double tr = m[0][0] + m[1][1];
    const double diff = 0.5 * (m[0][0] - m[1][1]);
    const double disc = std::hypot(diff, m[0][1]);
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

/// Classification away from Lambda, from the FD Hessian's eigenvalues.
inline Classification classify_hessian(const Matrix2& m, double tol = kClassificationTolerance) {
    const Vector2 ev = symmetric_eigenvalues(m);
    if (ev[0] > tol) return Classification::stable;
    if (ev[0] < -tol) return Classification::unstable;
    return Classification::marginal;
}

struct StabilityReport {
    double eps = 0.0;
    double T_analytic = 0.0;
    Vector2 grad_fd{};
    Matrix2 hessian_fd{};
    Classification classification = Classification::marginal;
};

inline StabilityReport stability_report(const DiffuseStability& s, double eps, FDSteps steps = {}) {
    StabilityReport r;
    r.eps = eps;
    r.T_analytic = s.t_coefficient(eps);
    const LatticeParams tri = triangular_lattice();
    const FDResult fd = fd_gradient_hessian([&](double x, double y) { return s.energy(eps, x, y); }, tri, steps);
    r.grad_fd = fd.grad;
    r.hessian_fd = fd.hessian;
    r.classification = classify(r.T_analytic);
    return r;
}

struct CurvePoint {
    double eps = 0.0;
    double T = 0.0;
};

struct StabilityCurve {
    std::vector<CurvePoint> points;
    /// Zeros of eps -> T_{h_eps} located by bisection between grid points.
    std::vector<double> sign_changes;
};

struct CurveOptions {
    double bisection_tolerance = 1e-4;
};

inline StabilityCurve stability_curve(const DiffuseStability& s, const std::vector<double>& eps_grid,
                                      CurveOptions opt = {}) {
    StabilityCurve out;
    const auto values = parallel_map(eps_grid.size(), [&](std::size_t i) { return s.t_coefficient(eps_grid[i]); });
    out.points.reserve(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i) out.points.push_back({eps_grid[i], values[i]});

    std::vector<std::pair<std::size_t, std::size_t>> brackets;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i] == 0.0) {
            out.sign_changes.push_back(eps_grid[i]);
        } else if ((values[i] < 0.0) != (values[i + 1] < 0.0) && values[i + 1] != 0.0) {
            brackets.emplace_back(i, i + 1);
        }
    }
    const auto roots = parallel_map(brackets.size(), [&](std::size_t k) {
        double lo = eps_grid[brackets[k].first];
        double hi = eps_grid[brackets[k].second];
        double tlo = values[brackets[k].first];
        while (hi - lo > opt.bisection_tolerance) {
            const double mid = 0.5 * (lo + hi);
            const double tm = s.t_coefficient(mid);
            if (tm == 0.0) return mid;
            if ((tm < 0.0) == (tlo < 0.0)) {
                lo = mid;
                tlo = tm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    });
    out.sign_changes.insert(out.sign_changes.end(), roots.begin(), roots.end());
    std::sort(out.sign_changes.begin(), out.sign_changes.end());
    return out;
}

inline StabilityCurve stability_curve(const RadialPotential& p, const RadialMeasure& mu,
                                      const std::vector<double>& eps_grid, CurveOptions opt = {}) {
    return stability_curve(DiffuseStability(p, mu), eps_grid, opt);
}

}  // namespace lattice_forge
