// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lattice_forge/energy.hpp"
#include "lattice_forge/optimize.hpp"
#include "lattice_forge/potential.hpp"
#include "lattice_forge/stability.hpp"
#include "test_support.hpp"

using namespace lattice_forge;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome jacobi_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ut(0.2, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng, 4.0);
        const double t = ut(rng);
        const Basis2D b = from_params(x, y);
        const double lhs = theta(b, t);
        worst = std::max(worst, std::abs(lhs - theta(b.dual(), 1.0 / t) / t) / lhs);
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs <= 5.0, fmt("max relative gap %.3g over 100 lattices, %.2f s", worst, secs)};
}

Outcome theta_minimality() {
    std::mt19937_64 rng(102);
    int violations = 0, strict_checked = 0;
    for (int i = 0; i < 200; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng, 4.0);
        const LatticeParams l{x, y, 1.0};
        const bool far = metric(l, triangular_lattice()) > 1e-3;
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            const double tri = theta(triangular_lattice(), t);
            const double other = theta(l, t);
            if (tri > other || (far && !(tri < other))) ++violations;
            strict_checked += far;
        }
    }
    return {violations == 0, fmt("%.0f violations in 800 (lattice, t) pairs, %.0f strict", violations, strict_checked)};
}

Outcome gaussian_pairs_minimize() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double alpha : {1.0, kPi, 5.0}) {
        for (double sigma : {0.2, 1.0}) {
            const DiffuseEnergy e(gaussian(alpha), RadialMeasure::radial_gaussian(sigma));
            const GlobalResult g =
                global_minimize([&](double x, double y) { return e.lattice_part(LatticeParams{x, y, 1.0}); });
            worst = std::max(worst, g.best.dist_to_triangular);
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-4 && secs <= 60.0, fmt("max distance to triangular %.3g over 6 pairs, %.2f s", worst, secs)};
}

Outcome first_sign_change() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> grid;
    for (int i = 0; i <= 500; ++i) grid.push_back(0.01 * i);
    const StabilityCurve c = stability_curve(gaussian(kPi), RadialMeasure::uniform_disk(1.0), grid);
    const double secs = seconds_since(t0);
    if (c.sign_changes.empty()) return {false, "no sign change on [0, 5]"};
    const double eps0 = c.sign_changes.front();
    int later = 0;
    for (std::size_t i = 1; i < c.sign_changes.size(); ++i) {
        later += (c.sign_changes[i] > 0.6 && c.sign_changes[i] < 5.0);
    }
    const bool pass = eps0 >= 0.50 && eps0 <= 0.60 && later >= 2 && secs <= 120.0;
    return {pass, fmt("first sign change at eps = %.5f (required [0.50, 0.60]); %.0f further on (0.6, 5); %.1f s", eps0,
                      later, secs)};
}

Outcome fourier_matches_direct() {
    std::mt19937_64 rng(105);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng, 3.0);
        const LatticeParams l{x, y, 1.0};
        for (double alpha : {1.0, kPi, 5.0}) {
            for (double sigma : {0.2, 1.0}) {
                const auto p = gaussian(alpha);
                const auto mu = RadialMeasure::radial_gaussian(sigma);
                const double f = diffuse_energy(p, mu, l).value;
                const double d = diffuse_energy_direct(p, mu, l);
                worst = std::max(worst, std::abs(f - d) / std::abs(d));
            }
        }
    }
    return {worst <= 1e-8, fmt("max relative gap %.3g over 20 lattices x 6 pairs", worst)};
}

Outcome criticality_and_isotropy() {
    const DiffuseStability s(gaussian(kPi), RadialMeasure::uniform_disk(1.0));
    bool pass = true;
    std::string detail;
    for (double eps : {0.0, 0.3, 1.0}) {
        const StabilityReport r = stability_report(s, eps);
        const double g = std::hypot(r.grad_fd[0], r.grad_fd[1]);
        const double off = std::abs(r.hessian_fd[0][1]) / std::abs(r.T_analytic);
        const double diag = std::abs(r.hessian_fd[0][0] - r.hessian_fd[1][1]) / std::abs(r.hessian_fd[0][0]);
        pass = pass && g <= 1e-7 && off <= 1e-6 && diag <= 1e-6;
        detail += fmt("eps %.1f: |grad| %.2g, off/|T| %.2g, diag gap %.2g; ", eps, g, off, diag);
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome t_coefficient_vs_fd() {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const double T = t_coefficient(gaussian(kPi * t));
        const FDResult fd = fd_gradient_hessian(
            [t](double x, double y) { return theta(half_plane_basis(x, y), t); }, triangular_lattice());
        for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(fd.hessian[k][k] - T) / std::abs(T));
    }
    return {worst <= 1e-4, fmt("max relative gap %.3g at t = 0.5, 1, 2", worst)};
}

Outcome hankel_closed_forms() {
    const RadialMeasure disk = RadialMeasure::uniform_disk(1.0);
    double worst = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double t = 0.01 * i;
        worst = std::max(worst, std::abs(hankel_quadrature(disk, t) - std::cyl_bessel_j(1.0, 2 * kPi * t) / (kPi * t)));
        for (double sigma : {0.3, 1.0}) {
            const RadialMeasure g = RadialMeasure::radial_gaussian(sigma);
            worst = std::max(worst, std::abs(hankel_quadrature(g, t) - std::exp(-kPi * sigma * sigma * t * t)));
        }
    }
    return {worst <= 1e-8, fmt("max abs gap %.3g over t in (0, 10]", worst)};
}

Outcome product_complete_monotonicity() {
    std::vector<double> samples;
    for (int i = 1; i <= 50; ++i) samples.push_back(10.0 * i / 50);
    int failures = 0, cases = 0;
    for (const auto& p : {gaussian(1.0), gaussian(kPi), inverse_power(1.0, 1.5), inverse_power(2.0, 3.0)}) {
        const RadialPotential phi = fourier(p);
        for (double sigma : {0.2, 0.5, 1.0}) {
            const RadialMeasure mu = RadialMeasure::radial_gaussian(sigma);
            auto H = [&](double r) {
                const double g = hankel(mu, std::sqrt(r));
                return phi.eval(r) * g * g;
            };
            failures += !check_completely_monotone(H, samples, 6);
            ++cases;
        }
    }
    return {failures == 0, fmt("%.0f of %.0f products certified to order 6", cases - failures, cases)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"AC1", jacobi_identity},
        {"AC2", theta_minimality},
        {"AC3", gaussian_pairs_minimize},
        {"AC4", first_sign_change},
        {"AC5", fourier_matches_direct},
        {"AC6", criticality_and_isotropy},
        {"AC7", t_coefficient_vs_fd},
        {"AC8", hankel_closed_forms},
        {"AC9", product_complete_monotonicity},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
