#pragma once

// Radial potentials f(x) = F(|x|^2) = int_0^inf e^{-t |x|^2} d mu_f(t) with a
// nonnegative Laplace-Stieltjes measure mu_f, stored as atoms plus quadrature
// nodes of its continuous part.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice_sum.hpp"
#include "lattice_forge/quadrature.hpp"

namespace lattice_forge {

/// Discrete representation of mu_f: `atoms` are genuine point masses, and
/// `density_nodes` discretize an absolutely continuous part. Node.position is t,
/// Node.weight is the mass.
struct LaplaceMeasure {
    std::vector<Node> atoms;
    std::vector<Node> density_nodes;

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (const Node& n : atoms) fn(n.position, n.weight);
        for (const Node& n : density_nodes) fn(n.position, n.weight);
    }

    double total_mass() const {
        double s = 0.0;
        for_each([&](double, double w) { s += w; });
        return s;
    }

    void validate() const {
        for_each([](double t, double w) {
            if (!(t > 0.0) || !std::isfinite(t)) {
                throw DomainError("LaplaceMeasure: node positions must be positive and finite");
            }
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw DomainError("LaplaceMeasure: node weights must be nonnegative and finite");
            }
        });
    }
};

/// |f(x)| + |f^(x)| <= C (1 + |x|)^{-2-eta}
struct DecayConstants {
    double C = 1.0;
    double eta = 1.0;
};

enum class PotentialKind { gaussian, inverse_power, laplace, fourier_image };

class RadialPotential {
public:
    RadialPotential() = default;
    RadialPotential(LaplaceMeasure rep, DecayConstants decay, PotentialKind kind, std::string description)
        : rep_(std::move(rep)), decay_(decay), kind_(kind), description_(std::move(description)) {
        rep_.validate();
    }

    const LaplaceMeasure& rep() const { return rep_; }
    const DecayConstants& decay() const { return decay_; }
    PotentialKind kind() const { return kind_; }
    const std::string& description() const { return description_; }

    /// F(r2) = f(x) with r2 = |x|^2.
    double eval(double r2) const { return derivative(r2, 0); }

    /// k-th derivative of F at r2: sum w (-t)^k e^{-r2 t}.
    double derivative(double r2, int order) const {
        if (order < 0) throw DomainError("RadialPotential::derivative: negative order");
        double s = 0.0;
        rep_.for_each([&](double t, double w) { s += w * std::pow(-t, order) * std::exp(-r2 * t); });
        return s;
    }

    /// f^(0) = int f dx = sum w pi / t.
    double fourier_at_zero() const {
        double s = 0.0;
        rep_.for_each([&](double t, double w) { s += w * std::numbers::pi / t; });
        return s;
    }

    /// Majorant of |F^{(k)}(|p|^2)| as a function of |p|.
    RadialMajorant majorant(int order = 0) const {
        RadialMajorant m;
        rep_.for_each([&](double t, double w) {
            if (w > 0.0) m.gaussian.push_back({w * std::pow(t, order), 0, t});
        });
        return m;
    }

    /// True iff the potential is a single Gaussian atom (closed forms apply).
    bool is_single_gaussian() const { return rep_.atoms.size() == 1 && rep_.density_nodes.empty(); }

private:
    LaplaceMeasure rep_;
    DecayConstants decay_;
    PotentialKind kind_ = PotentialKind::laplace;
    std::string description_;
};

inline double eval_derivatives(const RadialPotential& p, double r2, int order) {
    if (order < 0 || order > 2) throw DomainError("eval_derivatives: order must be 0, 1 or 2");
    return p.derivative(r2, order);
}

namespace detail {

/// Round-trip text for parameters in descriptions.
inline std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Image of a Laplace measure under the 2D Fourier transform:
/// e^{-t|x|^2} -> (pi/t) e^{-pi^2 |p|^2 / t}.
inline LaplaceMeasure fourier_rep(const LaplaceMeasure& m) {
    LaplaceMeasure out;
    auto map = [](const Node& n) {
        return Node{std::numbers::pi * std::numbers::pi / n.position, n.weight * std::numbers::pi / n.position};
    };
    out.atoms.reserve(m.atoms.size());
    out.density_nodes.reserve(m.density_nodes.size());
    for (const Node& n : m.atoms) out.atoms.push_back(map(n));
    for (const Node& n : m.density_nodes) out.density_nodes.push_back(map(n));
    return out;
}

inline double laplace_eval(const LaplaceMeasure& m, double r2) {
    double s = 0.0;
    m.for_each([&](double t, double w) { s += w * std::exp(-r2 * t); });
    return s;
}

/// Sampled C for |f| + |f^| <= C (1+r)^{-2-eta}, padded by 5%.
inline DecayConstants sample_decay_constants(const LaplaceMeasure& m, double eta) {
    const LaplaceMeasure mhat = fourier_rep(m);
    double c = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double r = (i == 0) ? 0.0 : std::pow(10.0, -3.0 + 6.0 * (i - 1) / 399.0);
        const double v = (laplace_eval(m, r * r) + laplace_eval(mhat, r * r)) * std::pow(1.0 + r, 2.0 + eta);
        c = std::max(c, v);
    }
    return {1.05 * c, eta};
}

}  // namespace detail

inline RadialPotential gaussian(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("gaussian: alpha must be positive, got " + std::to_string(alpha));
    }
    LaplaceMeasure rep;
    rep.atoms.push_back({alpha, 1.0});
    const DecayConstants decay = detail::sample_decay_constants(rep, 1.0);
    return {std::move(rep), decay, PotentialKind::gaussian, "gaussian:alpha=" + detail::format_param(alpha)};
}

struct InversePowerOptions {
    /// Relative truncation level of the Laplace density in log t.
    double tolerance = 1e-14;
    /// Trapezoidal step in v = log t; the error decays like exp(-pi^2 / step).
    double step = 0.25;
    std::size_t max_nodes = 4096;
};

/// f(x) = (a + |x|^2)^{-s}, whose Laplace density is t^{s-1} e^{-a t} / Gamma(s).
/// The density is discretized by the trapezoidal rule in v = log t, which is
/// exponentially convergent for this integrand and keeps all weights positive.
inline RadialPotential inverse_power(double a, double s, const InversePowerOptions& opt = {}) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("inverse_power: need a > 0, got " + std::to_string(a));
    if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("inverse_power: need s > 1, got " + std::to_string(s));

    const double lg = std::lgamma(s);
    const double log_tol = std::log(opt.tolerance);
    auto log_density = [&](double v) { return s * v - a * std::exp(v) - lg; };  // density * dt/dv, in log
    const double v_peak = std::log(s / a);
    const double peak = log_density(v_peak);

    // The lower tail must be resolved for int f = sum w pi/t, whose integrand
    // decays like e^{(s-1) v}; that is the slower of the two lower tails.
    double v_min = (log_tol + lg) / (s - 1.0) - std::log(a);
    v_min = std::min(v_min, v_peak - 1.0);
    double v_max = v_peak;
    while (log_density(v_max) > peak + log_tol - 5.0) v_max += opt.step;

    auto count = static_cast<std::size_t>(std::ceil((v_max - v_min) / opt.step)) + 1;
    if (count > opt.max_nodes) {
        count = opt.max_nodes;
        v_min = v_max - opt.step * static_cast<double>(count - 1);
    }

    LaplaceMeasure rep;
    rep.density_nodes.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double v = v_max - opt.step * static_cast<double>(j);
        const double w = opt.step * std::exp(log_density(v));
        if (w > 0.0) rep.density_nodes.push_back({std::exp(v), w});
    }
    std::reverse(rep.density_nodes.begin(), rep.density_nodes.end());

    const double eta = std::min(2.0 * s - 2.0, 1.0);
    const DecayConstants decay = detail::sample_decay_constants(rep, eta);
    return {std::move(rep), decay, PotentialKind::inverse_power,
            "invpower:a=" + detail::format_param(a) + ",s=" + detail::format_param(s)};
}

/// Finite Gaussian mixture sum w e^{-t |x|^2}.
inline RadialPotential laplace(std::vector<Node> atoms) {
    if (atoms.empty()) throw DomainError("laplace: need at least one atom");
    LaplaceMeasure rep;
    rep.atoms = std::move(atoms);
    rep.validate();
    const DecayConstants decay = detail::sample_decay_constants(rep, 1.0);
    std::string desc = "laplace:atoms=[";
    for (std::size_t i = 0; i < rep.atoms.size(); ++i) {
        if (i) desc += ",";
        desc += "(" + detail::format_param(rep.atoms[i].position) + "," + detail::format_param(rep.atoms[i].weight) + ")";
    }
    desc += "]";
    return {std::move(rep), decay, PotentialKind::laplace, desc};
}

/// Fourier transform f^(p) = int f(x) e^{-2 pi i p.x} dx, again in class F.
/// |f| + |f^| is symmetric under f -> f^, so the decay constants carry over.
inline RadialPotential fourier(const RadialPotential& p) {
    return {detail::fourier_rep(p.rep()), p.decay(), PotentialKind::fourier_image,
            "fourier(" + p.description() + ")"};
}

/// Checks |F(|x|^2)| <= C (1 + |x|)^{-2-eta} at the given radii.
inline bool satisfies_decay_bound(const RadialPotential& p, std::span<const double> radii) {
    const auto& d = p.decay();
    return std::all_of(radii.begin(), radii.end(), [&](double r) {
        return std::abs(p.eval(r * r)) <= d.C * std::pow(1.0 + r, -2.0 - d.eta) * (1.0 + 1e-12);
    });
}

/// Outcome of the alternating-difference test; `order`/`index` locate the
/// first violation when `monotone` is false.
struct MonotonicityVerdict {
    bool monotone = true;
    int order = -1;
    std::size_t index = 0;
    double value = 0.0;
};

/// Scaled divided differences k! F[r_i, ..., r_{i+k}] approximate F^{(k)}; a
/// completely monotone F has (-1)^k times them nonnegative for every window.
inline MonotonicityVerdict completely_monotone_verdict(const std::function<double(double)>& f,
                                                       std::span<const double> samples, int max_order,
                                                       double slack = 1e-12) {
    if (samples.empty()) return {};
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        if (!(samples[i] < samples[i + 1])) {
            throw DomainError("check_completely_monotone: samples must be strictly increasing");
        }
    }
    std::vector<double> diff(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) diff[i] = f(samples[i]);
    for (int k = 0; k <= max_order; ++k) {
        if (k > 0) {
            // diff[i] <- k * (diff[i+1] - diff[i]) / (r_{i+k} - r_i), keeping the k! factor.
            for (std::size_t i = 0; i + static_cast<std::size_t>(k) < samples.size(); ++i) {
                diff[i] = k * (diff[i + 1] - diff[i]) / (samples[i + static_cast<std::size_t>(k)] - samples[i]);
            }
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const std::size_t windows = samples.size() > static_cast<std::size_t>(k) ? samples.size() - k : 0;
        for (std::size_t i = 0; i < windows; ++i) {
            if (sign * diff[i] < -slack) return {false, k, i, diff[i]};
        }
    }
    return {};
}

inline bool check_completely_monotone(const std::function<double(double)>& f, std::span<const double> samples,
                                      int max_order, double slack = 1e-12) {
    return completely_monotone_verdict(f, samples, max_order, slack).monotone;
}

}  // namespace lattice_forge
