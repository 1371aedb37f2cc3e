#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lattice_forge/measure.hpp"
#include "lattice_forge/potential.hpp"
#include "test_support.hpp"

using namespace lattice_forge;

namespace {

const double kPi = std::numbers::pi;

double std_j0(double x) { return std::cyl_bessel_j(0.0, x); }
double std_j1(double x) { return std::cyl_bessel_j(1.0, x); }
double std_j2(double x) { return std::cyl_bessel_j(2.0, x); }

// g(t) = int_0^R J0(2 pi s t) 2 s / R^2 ds for the normalized disk, by Boost quadrature.
double disk_hankel_oracle(double radius, double t) {
    return test_support::gk_piecewise([&](double s) { return std_j0(2 * kPi * s * t) * 2 * s / (radius * radius); }, 0.0,
                                      radius, 8);
}

double gauss_hankel_oracle(double sigma, double t) {
    const double smax = sigma * std::sqrt(50.0 / kPi);
    return test_support::gk_piecewise(
        [&](double s) {
            return std_j0(2 * kPi * s * t) * 2 * kPi * s / (sigma * sigma) * std::exp(-kPi * s * s / (sigma * sigma));
        },
        0.0, smax, 16);
}

std::vector<RadialMeasure> sample_measures() {
    return {RadialMeasure::dirac(), RadialMeasure::uniform_disk(1.0), RadialMeasure::uniform_disk(0.3),
            RadialMeasure::radial_gaussian(1.0), RadialMeasure::radial_gaussian(0.2),
            RadialMeasure::profile({0.0, 0.5, 1.0}, {0.0, 2.0, 0.0})};
}

}  // namespace

TEST(Measure, TotalMassIsOne) {
    for (const auto& m : sample_measures()) EXPECT_NEAR(m.total_mass(), 1.0, 1e-12) << m.description();
}

TEST(Measure, ProfileValidation) {
    EXPECT_THROW(RadialMeasure::profile({0.0, 1.0, 0.5}, {1, 1, 1}), DomainError);
    EXPECT_THROW(RadialMeasure::profile({0.0, 1.0}, {1, -1}), DomainError);
    EXPECT_THROW(RadialMeasure::profile({0.0}, {1}), DomainError);
    EXPECT_THROW(RadialMeasure::profile({0.0, 1.0}, {0, 0}), DomainError);
    EXPECT_THROW(RadialMeasure::uniform_disk(0.0), DomainError);
    EXPECT_THROW(RadialMeasure::radial_gaussian(-1.0), DomainError);
}

TEST(Hankel, DiracIsOne) {
    const RadialMeasure d = RadialMeasure::dirac();
    for (double t : {0.0, 0.5, 3.0, 100.0}) {
        EXPECT_EQ(hankel(d, t), 1.0);
        EXPECT_EQ(hankel_quadrature(d, t), 1.0);
    }
}

TEST(Hankel, DiskClosedFormMatchesQuadrature) {
    const RadialMeasure d = RadialMeasure::uniform_disk(1.0);
    for (double t = 0.01; t <= 10.0; t += 0.01) {
        const double closed = std_j1(2 * kPi * t) / (kPi * t);
        EXPECT_NEAR(hankel(d, t), closed, 1e-13) << t;
        EXPECT_NEAR(hankel_quadrature(d, t), closed, 1e-8) << t;
    }
    EXPECT_EQ(hankel(d, 0.0), 1.0);
}

TEST(Hankel, DiskAgainstIndependentQuadrature) {
    for (double t : {0.1, 1.0, 2.7, 9.5}) EXPECT_NEAR(hankel(RadialMeasure::uniform_disk(1.0), t), disk_hankel_oracle(1.0, t), 1e-12);
}

TEST(Hankel, GaussianClosedFormMatchesQuadrature) {
    for (double sigma : {1.0, 0.4}) {
        const RadialMeasure g = RadialMeasure::radial_gaussian(sigma);
        for (double t = 0.01; t <= 10.0; t += 0.01) {
            const double closed = std::exp(-kPi * sigma * sigma * t * t);
            EXPECT_NEAR(hankel(g, t), closed, 1e-15);
            EXPECT_NEAR(hankel_quadrature(g, t), closed, 1e-8) << sigma << " " << t;
        }
        for (double t : {0.2, 0.9, 2.0}) EXPECT_NEAR(hankel(g, t), gauss_hankel_oracle(sigma, t), 1e-12);
    }
}

TEST(Hankel, BoundedByOne) {
    for (const auto& m : sample_measures()) {
        EXPECT_NEAR(hankel(m, 0.0), 1.0, 1e-12);
        for (double t = 0.0; t <= 20.0; t += 0.05) EXPECT_LE(std::abs(hankel(m, t)), 1.0 + 1e-12);
    }
}

TEST(Hankel, ProfileTaggingAndCallable) {
    const HankelProfile disk = hankel_profile(RadialMeasure::uniform_disk(1.0));
    ASSERT_TRUE(disk.closed_form.has_value());
    EXPECT_EQ(*disk.closed_form, MeasureKind::uniform_disk);
    EXPECT_NEAR(disk.g(0.7), std_j1(2 * kPi * 0.7) / (kPi * 0.7), 1e-13);
    const HankelProfile prof = hankel_profile(RadialMeasure::profile({0.0, 1.0}, {1.0, 1.0}));
    EXPECT_FALSE(prof.closed_form.has_value());
}

TEST(Hankel, ProfileMatchesDiskWhenDensityIsLinear) {
    // A profile with psi density 2 s on [0, 1] is the unit disk.
    const RadialMeasure p = RadialMeasure::profile({0.0, 1.0}, {0.0, 2.0});
    for (double t : {0.0, 0.4, 1.3, 4.0}) EXPECT_NEAR(hankel(p, t), hankel(RadialMeasure::uniform_disk(1.0), t), 1e-12);
}

TEST(Scale, ZeroGivesDirac) {
    for (const auto& m : sample_measures()) EXPECT_EQ(scale(m, 0.0).kind(), MeasureKind::dirac);
    EXPECT_THROW(scale(RadialMeasure::uniform_disk(1), -1.0), DomainError);
}

TEST(Scale, DiskClosedForm) {
    for (double eps : {0.3, 1.0, 2.5}) {
        const RadialMeasure d = scale(RadialMeasure::uniform_disk(1.0), eps);
        for (double t : {0.1, 0.77, 3.0}) {
            EXPECT_NEAR(hankel(d, t), std_j1(2 * kPi * eps * t) / (kPi * eps * t), 1e-13);
            EXPECT_NEAR(hankel_quadrature(d, t), std_j1(2 * kPi * eps * t) / (kPi * eps * t), 1e-8);
        }
    }
}

TEST(Scale, ComposesMultiplicatively) {
    for (const auto& m : sample_measures()) {
        const RadialMeasure ab = scale(scale(m, 0.7), 1.9);
        const RadialMeasure c = scale(m, 0.7 * 1.9);
        for (double t : {0.0, 0.3, 1.1, 2.2}) {
            EXPECT_NEAR(hankel(ab, t), hankel(c, t), 1e-12);
            EXPECT_NEAR(hankel_quadrature(ab, t), hankel_quadrature(c, t), 1e-12);
        }
    }
}

TEST(Scale, HankelOfScaledIsDilatedHankel) {
    for (const auto& m : sample_measures()) {
        for (double t : {0.2, 1.5}) EXPECT_NEAR(hankel(scale(m, 1.7), t), hankel(m, 1.7 * t), 1e-12) << m.description();
    }
}

TEST(Moments, ClosedFormsMatchQuadrature) {
    for (const auto& m : sample_measures()) {
        for (int k : {1, 2}) {
            double q = 0.0;
            m.for_each([&](double s, double w) { q += w * std::pow(s, k); });
            EXPECT_NEAR(m.moment(k), q, 1e-12) << m.description() << " k=" << k;
        }
    }
}

TEST(HankelMoments, DiracIsTrivial) {
    for (double eps : {0.0, 0.5, 3.0}) {
        const HankelMoments a = hankel_moments(RadialMeasure::dirac(), eps, 1.3);
        EXPECT_EQ(a.a0, 1.0);
        EXPECT_EQ(a.a1, 0.0);
        EXPECT_EQ(a.a2, 0.0);
    }
}

TEST(HankelMoments, SmallArgumentLimit) {
    // A1 ~ int s (pi s eps sqrt r) 2 s ds = pi eps sqrt(r) / 2 for the unit disk.
    const RadialMeasure d = RadialMeasure::uniform_disk(1.0);
    for (double k : {1e-3, 1e-4, 1e-5}) {
        const HankelMoments a = hankel_moments(d, k, 1.0);
        EXPECT_NEAR(a.a0, 1.0, 10 * k * k);
        EXPECT_NEAR(a.a1 / (kPi * k / 2), 1.0, 10 * k * k);
    }
}

TEST(HankelMoments, UnitDiskAgainstIndependentQuadrature) {
    const RadialMeasure d = RadialMeasure::uniform_disk(1.0);
    for (auto [eps, r] : {std::pair{1.0, 1.0}, {0.5, 2.0}, {2.0, 3.7}}) {
        const double z = 2 * kPi * eps * std::sqrt(r);
        const double o0 = test_support::gk_piecewise([&](double s) { return std_j0(z * s) * 2 * s; }, 0, 1, 8);
        const double o1 = test_support::gk_piecewise([&](double s) { return s * std_j1(z * s) * 2 * s; }, 0, 1, 8);
        const double o2 =
            test_support::gk_piecewise([&](double s) { return s * s * (std_j2(z * s) - std_j0(z * s)) * 2 * s; }, 0, 1, 8);
        const HankelMoments a = hankel_moments(d, eps, r);
        EXPECT_NEAR(a.a0, o0, 1e-10);
        EXPECT_NEAR(a.a1, o1, 1e-10);
        EXPECT_NEAR(a.a2, o2, 1e-10);
    }
}

TEST(HankelMoments, DerivativeFormulaMatchesFiniteDifferences) {
    // (g_eps^2)'(r) = -(2 pi eps / sqrt r) A1 A0 for r -> g(eps sqrt r)^2.
    for (const auto& m : {RadialMeasure::uniform_disk(1.0), RadialMeasure::radial_gaussian(0.7)}) {
        for (auto [eps, r] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {1.3, 0.6}}) {
            auto g2 = [&](double rr) {
                const double g = hankel(m, eps * std::sqrt(rr));
                return g * g;
            };
            const HankelMoments a = hankel_moments(m, eps, r);
            const double formula = -(2 * kPi * eps / std::sqrt(r)) * a.a1 * a.a0;
            const double fd = test_support::fd1(g2, r, 1e-4);
            EXPECT_NEAR(formula, fd, 1e-5 * std::abs(fd)) << m.description() << " " << eps << " " << r;
        }
    }
}

TEST(SelfConvolution, DiracGivesValueAtZero) {
    for (const auto& p : {gaussian(1.0), inverse_power(1, 1.5)}) {
        EXPECT_EQ(self_convolution_at_zero(p, RadialMeasure::dirac()), p.eval(0.0));
    }
}

TEST(SelfConvolution, GaussianPairClosedForm) {
    // e^{-a|x|^2} * mu * mu at 0 with mu of variance parameter sigma: pi / (pi + 2 sigma^2 a).
    for (double a : {1.0, kPi, 5.0}) {
        for (double sigma : {0.2, 1.0, 2.0}) {
            const double closed = kPi / (kPi + 2 * sigma * sigma * a);
            EXPECT_NEAR(self_convolution_at_zero(gaussian(a), RadialMeasure::radial_gaussian(sigma)), closed,
                        1e-8 * closed);
        }
    }
}

TEST(SelfConvolution, DirectDoubleIntegralOracle) {
    // For the unit disk and f = e^{-|x|^2}: int int f(u - v) dmu(u) dmu(v) in polar coordinates,
    // using the angular average of e^{-|u-v|^2} = e^{-s^2-q^2} I0(2 s q).
    const RadialPotential f = gaussian(1.0);
    const RadialMeasure d = RadialMeasure::uniform_disk(1.0);
    const double oracle = test_support::gk_integral(
        [](double s) {
            return test_support::gk_integral(
                [&](double q) {
                    return std::exp(-s * s - q * q) * std::cyl_bessel_i(0.0, 2 * s * q) * 2 * s * 2 * q;
                },
                0.0, 1.0);
        },
        0.0, 1.0);
    EXPECT_NEAR(self_convolution_at_zero(f, d), oracle, 1e-10);
}

TEST(SelfConvolution, AtMostValueAtZero) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 12; ++i) {
        const RadialPotential p = (i % 2) ? gaussian(u(rng)) : inverse_power(u(rng), 1.0 + u(rng));
        const RadialMeasure m = (i % 3 == 0) ? RadialMeasure::uniform_disk(u(rng)) : RadialMeasure::radial_gaussian(u(rng));
        EXPECT_LE(self_convolution_at_zero(p, m), p.eval(0.0) * (1 + 1e-12)) << p.description() << " " << m.description();
    }
}
