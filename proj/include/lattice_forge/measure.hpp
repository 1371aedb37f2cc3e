#pragma once

// Rotationally symmetric probability measures mu on R^2, described by the
// radial Lebesgue-Stieltjes measure psi of t -> mu(B_t), and their Hankel
// transforms g(t) = int J_0(2 pi s t) d psi(s), which equal mu^(p) at |p| = t.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lattice_forge/bessel.hpp"
#include "lattice_forge/errors.hpp"
#include "lattice_forge/potential.hpp"
#include "lattice_forge/quadrature.hpp"

namespace lattice_forge {

enum class MeasureKind { dirac, uniform_disk, radial_gaussian, profile };

inline std::string to_string(MeasureKind k) {
    switch (k) {
        case MeasureKind::dirac: return "dirac";
        case MeasureKind::uniform_disk: return "uniform_disk";
        case MeasureKind::radial_gaussian: return "radial_gaussian";
        case MeasureKind::profile: return "profile";
    }
    return "unknown";
}

class RadialMeasure {
public:
    /// Point mass at the origin.
    static RadialMeasure dirac() {
        RadialMeasure m;
        m.kind_ = MeasureKind::dirac;
        m.psi_atoms_.push_back({0.0, 1.0});
        return m;
    }

    /// Normalized indicator of the disk of radius R: d psi = 2 s / R^2 ds on [0, R].
    static RadialMeasure uniform_disk(double radius) {
        if (!(radius > 0.0) || !std::isfinite(radius)) {
            throw DomainError("uniform_disk: radius must be positive, got " + std::to_string(radius));
        }
        RadialMeasure m;
        m.kind_ = MeasureKind::uniform_disk;
        m.parameter_ = radius;
        m.psi_nodes_ = composite_gauss_legendre(0.0, radius, kPanels, kOrder);
        for (Node& n : m.psi_nodes_) n.weight *= 2.0 * n.position / (radius * radius);
        m.normalize();
        return m;
    }

    /// Density e^{-pi |x|^2 / sigma^2} / sigma^2, so that g(t) = e^{-pi sigma^2 t^2}.
    /// d psi = (2 pi s / sigma^2) e^{-pi s^2 / sigma^2} ds, truncated where e^{-46}.
    static RadialMeasure radial_gaussian(double sigma) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw DomainError("radial_gaussian: sigma must be positive, got " + std::to_string(sigma));
        }
        RadialMeasure m;
        m.kind_ = MeasureKind::radial_gaussian;
        m.parameter_ = sigma;
        const double s_max = sigma * std::sqrt(46.0 / std::numbers::pi);
        m.psi_nodes_ = composite_gauss_legendre(0.0, s_max, 2 * kPanels, kOrder);
        for (Node& n : m.psi_nodes_) {
            const double s = n.position;
            n.weight *= 2.0 * std::numbers::pi * s / (sigma * sigma) * std::exp(-std::numbers::pi * s * s / (sigma * sigma));
        }
        m.normalize();
        return m;
    }

    /// Piecewise-linear density of psi through (s_i, d_i); normalized to mass 1.
    static RadialMeasure profile(const std::vector<double>& s, const std::vector<double>& density) {
        if (s.size() != density.size() || s.size() < 2) {
            throw DomainError("profile: need at least two (s, density) rows of equal length");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!(s[i] >= 0.0) || !std::isfinite(s[i])) throw DomainError("profile: s must be nonnegative and finite");
            if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
                throw DomainError("profile: density must be nonnegative and finite");
            }
            if (i > 0 && !(s[i] > s[i - 1])) throw DomainError("profile: s must be strictly increasing");
        }
        RadialMeasure m;
        m.kind_ = MeasureKind::profile;
        m.parameter_ = s.back();
        const double panel_width = (s.back() - s.front()) / (2.0 * kPanels);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const int panels = std::max(1, static_cast<int>(std::ceil((s[i + 1] - s[i]) / panel_width)));
            auto nodes = composite_gauss_legendre(s[i], s[i + 1], panels, 8);
            for (Node& n : nodes) {
                const double u = (n.position - s[i]) / (s[i + 1] - s[i]);
                n.weight *= (1.0 - u) * density[i] + u * density[i + 1];
            }
            m.psi_nodes_.insert(m.psi_nodes_.end(), nodes.begin(), nodes.end());
        }
        if (!(m.total_mass() > 0.0)) throw DomainError("profile: density has zero mass");
        m.normalize();
        return m;
    }

    MeasureKind kind() const { return kind_; }
    /// Disk radius, Gaussian sigma, or profile support end; 0 for dirac.
    double parameter() const { return parameter_; }
    const std::vector<Node>& psi_atoms() const { return psi_atoms_; }
    const std::vector<Node>& psi_nodes() const { return psi_nodes_; }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (const Node& n : psi_atoms_) fn(n.position, n.weight);
        for (const Node& n : psi_nodes_) fn(n.position, n.weight);
    }

    double total_mass() const {
        double s = 0.0;
        for_each([&](double, double w) { s += w; });
        return s;
    }

    /// int s^k d psi; closed forms for the parametric families.
    double moment(int k) const {
        switch (kind_) {
            case MeasureKind::dirac: return k == 0 ? 1.0 : 0.0;
            case MeasureKind::uniform_disk: return 2.0 * std::pow(parameter_, k) / (k + 2.0);
            case MeasureKind::radial_gaussian:
                // int_0^inf s^k (2 pi s / sigma^2) e^{-pi s^2/sigma^2} ds = (sigma^2/pi)^{k/2} Gamma(1 + k/2)
                return std::pow(parameter_ * parameter_ / std::numbers::pi, 0.5 * k) * std::tgamma(1.0 + 0.5 * k);
            case MeasureKind::profile: break;
        }
        double s = 0.0;
        for_each([&](double pos, double w) { s += w * std::pow(pos, k); });
        return s;
    }

    std::string description() const {
        switch (kind_) {
            case MeasureKind::dirac: return "dirac";
            case MeasureKind::uniform_disk: return "disk:r=" + detail::format_param(parameter_);
            case MeasureKind::radial_gaussian: return "gauss:sigma=" + detail::format_param(parameter_);
            case MeasureKind::profile: return "profile";
        }
        return "unknown";
    }

    /// Spatial dilation by eps: s -> eps s, so that g_eps(t) = g(eps t).
    RadialMeasure dilated(double eps) const {
        if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("scale: eps must be nonnegative");
        if (eps == 0.0 || kind_ == MeasureKind::dirac) return dirac();
        RadialMeasure m = *this;
        m.parameter_ *= eps;
        for (Node& n : m.psi_atoms_) n.position *= eps;
        for (Node& n : m.psi_nodes_) n.position *= eps;
        return m;
    }

private:
    static constexpr int kPanels = 48;
    static constexpr int kOrder = 16;

    void normalize() {
        const double mass = total_mass();
        for (Node& n : psi_atoms_) n.weight /= mass;
        for (Node& n : psi_nodes_) n.weight /= mass;
    }

    MeasureKind kind_ = MeasureKind::dirac;
    double parameter_ = 0.0;
    std::vector<Node> psi_atoms_;
    std::vector<Node> psi_nodes_;
};

inline RadialMeasure scale(const RadialMeasure& mu, double eps) { return mu.dilated(eps); }

/// g(t) by quadrature over psi, ignoring any closed form.
inline double hankel_quadrature(const RadialMeasure& mu, double t) {
    const double k = 2.0 * std::numbers::pi * t;
    double s = 0.0;
    mu.for_each([&](double pos, double w) { s += w * bessel_j0(k * pos); });
    return s;
}

/// g(t) = int J_0(2 pi s t) d psi(s), using closed forms where they exist.
inline double hankel(const RadialMeasure& mu, double t) {
    switch (mu.kind()) {
        case MeasureKind::dirac: return 1.0;
        case MeasureKind::uniform_disk: return bessel_jinc(2.0 * std::numbers::pi * mu.parameter() * t);
        case MeasureKind::radial_gaussian: {
            const double st = mu.parameter() * t;
            return std::exp(-std::numbers::pi * st * st);
        }
        case MeasureKind::profile: break;
    }
    return hankel_quadrature(mu, t);
}

struct HankelProfile {
    std::function<double(double)> g;
    std::optional<MeasureKind> closed_form;
};

inline HankelProfile hankel_profile(const RadialMeasure& mu) {
    std::optional<MeasureKind> tag;
    if (mu.kind() != MeasureKind::profile) tag = mu.kind();
    return {[mu](double t) { return hankel(mu, t); }, tag};
}

/// The three psi-integrals at argument z = 2 pi s eps sqrt(r):
/// a0 = int J_0(z), a1 = int s J_1(z), a2 = int s^2 (J_2(z) - J_0(z)).
struct HankelMoments {
    double a0 = 1.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

inline HankelMoments hankel_moments(const RadialMeasure& mu, double eps, double r) {
    if (!(r > 0.0)) throw DomainError("hankel_moments: r must be positive");
    const double m2 = mu.moment(2);
    if (!std::isfinite(m2)) throw MomentError("hankel_moments: second radial moment of psi is infinite");
    const double k = 2.0 * std::numbers::pi * eps * std::sqrt(r);
    HankelMoments out{0.0, 0.0, 0.0};
    mu.for_each([&](double s, double w) {
        const double z = k * s;
        const double j0 = bessel_j0(z);
        out.a0 += w * j0;
        out.a1 += w * s * bessel_j1(z);
        out.a2 += w * s * s * (bessel_j2(z) - j0);
    });
    return out;
}

/// (f * mu * mu)(0) = 2 pi int_0^inf Phi(r^2) g(r)^2 r dr with Phi = f^, integrated
/// node by node over the Laplace representation of Phi.
inline double self_convolution_at_zero(const RadialPotential& p, const RadialMeasure& mu, double rel_tol = 1e-12) {
    if (mu.kind() == MeasureKind::dirac) return p.eval(0.0);
    const RadialPotential phi = fourier(p);
    double total = 0.0;
    phi.rep().for_each([&](double t, double w) {
        if (w == 0.0) return;
        const double r_max = std::sqrt(46.0 / t);
        auto integrand = [&](double r) {
            const double g = hankel(mu, r);
            return std::exp(-t * r * r) * g * g * r;
        };
        const auto res = integrate_adaptive(integrand, 0.0, r_max, 0.0, rel_tol, 16);
        total += 2.0 * std::numbers::pi * w * res.value;
    });
    return total;
}

}  // namespace lattice_forge
