#pragma once

// Lattice energies: theta functions, point energies E_h[L] = sum' h(p), and the
// energy of diffuse particles computed on the Fourier side,
//
//   E_{f,mu}[L] = (1/V) sum'_{p in L*} f^(p) g(|p|)^2 + f^(0)/V - (f * mu * mu)(0),
//
// with a direct-space route for Gaussian pairs and a Poisson-summation check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <functional>
#include <string>
#include <vector>

#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice.hpp"
#include "lattice_forge/lattice_sum.hpp"
#include "lattice_forge/measure.hpp"
#include "lattice_forge/potential.hpp"

namespace lattice_forge {

struct EnergyReport {
    double value = 0.0;
    double lattice_part = 0.0;
    double constant_part = 0.0;
    double cutoff_R = 0.0;
    double tail_bound = 0.0;
    std::size_t terms_used = 0;
};

/// theta_L(t) = sum_{x in L} e^{-pi t |x|^2}, origin included; the truncation
/// tail is at most rtol * theta.
inline TruncatedSum theta_sum(const Basis2D& basis, double t, double rtol = 1e-15) {
    if (!(t > 0.0)) throw DomainError("theta: t must be positive, got " + std::to_string(t));
    RadialMajorant m;
    m.gaussian.push_back({1.0, 0, std::numbers::pi * t});
    const double a = std::numbers::pi * t;
    auto s = lattice_sum(basis, [a](const LatticePoint& p) { return std::exp(-a * p.norm2); }, m,
                         Tolerance{rtol, rtol});
    s.value += 1.0;
    return s;
}

inline double theta(const Basis2D& basis, double t, double rtol = 1e-15) { return theta_sum(basis, t, rtol).value; }

inline double theta(const LatticeParams& lattice, double t, double rtol = 1e-15) {
    return theta(to_basis(lattice), t, rtol);
}

/// E_h[L] = sum over nonzero p of h(p), with h controlled by `majorant`.
template <class H>
TruncatedSum point_energy(H&& h, const Basis2D& basis, const RadialMajorant& majorant, Tolerance tol) {
    return lattice_sum(basis, [&](const LatticePoint& p) { return h(p.p); }, majorant, tol);
}

/// Variant for summands known only through their class-F decay constants.
template <class H>
TruncatedSum point_energy(H&& h, const Basis2D& basis, const DecayConstants& decay, Tolerance tol) {
    if (!(decay.eta > 0.0) || !std::isfinite(decay.C) || decay.C < 0.0) {
        throw ConvergenceError("point_energy: decay constants (C, eta) with eta > 0 are required");
    }
    RadialMajorant m;
    if (decay.C > 0.0) m.power.push_back({decay.C, decay.eta});
    return point_energy(std::forward<H>(h), basis, m, tol);
}

template <class H, class Control>
TruncatedSum point_energy(H&& h, const LatticeParams& lattice, const Control& control, Tolerance tol) {
    return point_energy(std::forward<H>(h), to_basis(lattice), control, tol);
}

/// Energy of a fixed (potential, measure) pair as a function of the lattice.
/// The lattice-independent part f^(0) - (f * mu * mu)(0) is computed once.
class DiffuseEnergy {
public:
    DiffuseEnergy(RadialPotential potential, RadialMeasure measure, Tolerance tol = {1e-14, 0.0})
        : potential_(std::move(potential)),
          measure_(std::move(measure)),
          phi_(fourier(potential_)),
          majorant_(phi_.majorant(0)),
          tol_(tol) {
        fhat0_ = potential_.fourier_at_zero();
        self_conv_ = self_convolution_at_zero(potential_, measure_);
    }

    const RadialPotential& potential() const { return potential_; }
    const RadialMeasure& measure() const { return measure_; }
    const RadialPotential& phi() const { return phi_; }

    /// h(p) = f^(p) g(|p|)^2 as a function of |p|^2.
    double h(double p2) const {
        const double g = hankel(measure_, std::sqrt(p2));
        return phi_.eval(p2) * g * g;
    }

    /// sum'_{p in L*} h(p) for a unit-density lattice; general covolume V
    /// multiplies the sum by 1/V.
    TruncatedSum lattice_sum_dual(const Basis2D& basis) const {
        const Basis2D d = basis.dual();
        double last_p2 = -1.0;
        double last_h = 0.0;
        auto summand = [&](const LatticePoint& p) {
            if (p.norm2 != last_p2) {
                last_p2 = p.norm2;
                last_h = h(p.norm2);
            }
            return last_h;
        };
        Tolerance tol = tol_;
        if (tol.atol == 0.0) tol.atol = 1e-300;
        return lattice_sum(d, summand, majorant_, tol);
    }

    double constant_part(double covolume = 1.0) const { return fhat0_ / covolume - self_conv_; }
    double self_convolution() const { return self_conv_; }

    EnergyReport report(const Basis2D& basis) const {
        const double v = basis.covolume();
        const TruncatedSum s = lattice_sum_dual(basis);
        EnergyReport r;
        r.lattice_part = s.value / v;
        r.constant_part = constant_part(v);
        r.value = r.lattice_part + r.constant_part;
        r.cutoff_R = s.cutoff;
        r.tail_bound = s.tail_bound / v;
        r.terms_used = s.terms;
        return r;
    }

    EnergyReport report(const LatticeParams& lattice) const { return report(to_basis(lattice)); }

    /// Lattice-dependent part only; what minimization works with.
    double lattice_part(const LatticeParams& lattice) const {
        const Basis2D b = to_basis(lattice);
        return lattice_sum_dual(b).value / b.covolume();
    }

private:
    RadialPotential potential_;
    RadialMeasure measure_;
    RadialPotential phi_;
    RadialMajorant majorant_;
    Tolerance tol_;
    double fhat0_ = 0.0;
    double self_conv_ = 0.0;
};

inline EnergyReport diffuse_energy(const RadialPotential& p, const RadialMeasure& mu, const LatticeParams& lattice,
                                   double rtol = 1e-14) {
    return DiffuseEnergy(p, mu, Tolerance{rtol, 0.0}).report(lattice);
}

/// E_h[L] for h(p) = f^(p) g_eps(|p|)^2 summed over L itself (not its dual). By
/// self-duality of the triangular lattice this is the energy landscape whose
/// Hessian at Lambda is T_{h_eps}.
inline double fourier_side_point_energy(const RadialPotential& phi, const RadialMeasure& mu, const Basis2D& basis,
                                        Tolerance tol = {1e-15, 1e-300}) {
    double last_p2 = -1.0;
    double last_h = 0.0;
    auto summand = [&](const LatticePoint& p) {
        if (p.norm2 != last_p2) {
            last_p2 = p.norm2;
            const double g = hankel(mu, std::sqrt(p.norm2));
            last_h = phi.eval(p.norm2) * g * g;
        }
        return last_h;
    };
    return lattice_sum(basis, summand, phi.majorant(0), tol).value;
}

/// sum'_{x in L} (f * mu * mu)(x) in direct space, for mu dirac or radial
/// Gaussian, where f * mu * mu is again a Gaussian mixture:
/// e^{-t|x|^2} * mu * mu = kappa/(t+kappa) e^{-t kappa/(t+kappa) |x|^2}, kappa = pi/(2 sigma^2).
inline TruncatedSum diffuse_energy_direct_sum(const RadialPotential& p, const RadialMeasure& mu, const Basis2D& basis,
                                              double rtol = 1e-14) {
    std::vector<GaussianTerm> terms;
    if (mu.kind() == MeasureKind::dirac) {
        p.rep().for_each([&](double t, double w) { terms.push_back({w, 0, t}); });
    } else if (mu.kind() == MeasureKind::radial_gaussian) {
        const double sigma = mu.parameter();
        const double kappa = std::numbers::pi / (2.0 * sigma * sigma);
        p.rep().for_each([&](double t, double w) { terms.push_back({w * kappa / (t + kappa), 0, t * kappa / (t + kappa)}); });
    } else {
        throw UnsupportedError("diffuse_energy_direct: measure '" + mu.description() +
                               "' has no closed-form Gaussian convolution");
    }
    RadialMajorant m;
    m.gaussian = terms;
    auto summand = [&](const LatticePoint& pt) {
        double s = 0.0;
        for (const auto& g : terms) s += g.coeff * std::exp(-g.rate * pt.norm2);
        return s;
    };
    return lattice_sum(basis, summand, m, Tolerance{rtol, 1e-300});
}

inline double diffuse_energy_direct(const RadialPotential& p, const RadialMeasure& mu, const LatticeParams& lattice,
                                    double rtol = 1e-14) {
    return diffuse_energy_direct_sum(p, mu, to_basis(lattice), rtol).value;
}

struct PoissonCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double diff = 0.0;
};

/// Both sides of sum_{x in L} f(x + z) = (1/V) sum_{p in L*} e^{2 pi i p.z} f^(p).
inline PoissonCheck poisson_check(const RadialPotential& p, const LatticeParams& lattice, Vec2 z,
                                  double rtol = 1e-15) {
    const Basis2D basis = to_basis(lattice);
    const double covol = basis.covolume();
    const double rho = covering_radius(basis);
    const RadialMajorant m = p.majorant(0);

    // Direct side: points ordered by |x + z|; the counting bound holds for any centre.
    const double scale = p.eval(0.0);
    const double r_cut = cutoff_for(m, std::max(rtol * scale, 1e-300), covol, rho, shortest_vector(basis));
    const double shift = norm(z);
    const ShellEnumeration shells = enumerate_shells(basis, r_cut + shift);
    std::vector<double> d2;
    d2.reserve(shells.count() + 1);
    d2.push_back(norm2(z));
    for (const auto& pt : shells.points) {
        const double q = norm2(pt.p + z);
        if (q <= r_cut * r_cut) d2.push_back(q);
    }
    std::sort(d2.begin(), d2.end(), std::greater<>());
    double lhs = 0.0;
    for (double q : d2) lhs += p.eval(q);

    // Fourier side.
    const RadialPotential phi = fourier(p);
    const Basis2D dual_basis = basis.dual();
    auto summand = [&](const LatticePoint& pt) {
        return std::cos(2.0 * std::numbers::pi * dot(pt.p, z)) * phi.eval(pt.norm2);
    };
    const TruncatedSum rs = lattice_sum(dual_basis, summand, phi.majorant(0), Tolerance{rtol, rtol * phi.eval(0.0)});
    const double rhs = (rs.value + phi.eval(0.0)) / covol;
    return {lhs, rhs, std::abs(lhs - rhs)};
}

}  // namespace lattice_forge
