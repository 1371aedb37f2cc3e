#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "lattice_forge/lattice.hpp"
#include "test_support.hpp"

using namespace lattice_forge;

namespace {

const double kS3 = std::numbers::sqrt3;

void expect_vec(Vec2 a, Vec2 b, double tol = 1e-15) {
    EXPECT_NEAR(a.x, b.x, tol);
    EXPECT_NEAR(a.y, b.y, tol);
}

// All nonzero (m, n) with |m u1 + n u2| <= R from an oversized box.
std::set<std::pair<long, long>> box_scan(const Basis2D& b, double r, long box) {
    std::set<std::pair<long, long>> out;
    for (long m = -box; m <= box; ++m) {
        for (long n = -box; n <= box; ++n) {
            if ((m || n) && norm2(b.at(m, n)) <= r * r) out.insert({m, n});
        }
    }
    return out;
}

// Shortest nonzero vector by exhaustive search.
double brute_shortest(const Basis2D& b, long box = 30) {
    double best = INFINITY;
    for (long m = -box; m <= box; ++m)
        for (long n = -box; n <= box; ++n)
            if (m || n) best = std::min(best, norm(b.at(m, n)));
    return best;
}

// Lattices are equal iff each basis is an integer combination of the other.
bool same_lattice(const Basis2D& a, const Basis2D& b, double tol = 1e-9) {
    auto coords = [](const Basis2D& base, Vec2 v) {
        const double det = base.determinant();
        return std::pair{cross(v, base.u2) / det, cross(base.u1, v) / det};
    };
    for (Vec2 v : {b.u1, b.u2}) {
        auto [m, n] = coords(a, v);
        if (std::abs(m - std::round(m)) > tol || std::abs(n - std::round(n)) > tol) return false;
    }
    for (Vec2 v : {a.u1, a.u2}) {
        auto [m, n] = coords(b, v);
        if (std::abs(m - std::round(m)) > tol || std::abs(n - std::round(n)) > tol) return false;
    }
    return true;
}

}  // namespace

TEST(FromParams, SquareLattice) {
    const Basis2D b = from_params(0.0, 1.0);
    expect_vec(b.u1, {1, 0});
    expect_vec(b.u2, {0, 1});
}

TEST(FromParams, TriangularGramMatchesHexagonalBasis) {
    const Basis2D b = from_params(0.5, kS3 / 2);
    // Unit-density hexagonal basis: side a with a^2 sqrt3/2 = 1.
    const double a = std::sqrt(2.0 / kS3);
    const Basis2D hex{{a, 0}, {a / 2, a * kS3 / 2}};
    const auto g1 = b.gram();
    const auto g2 = hex.gram();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(g1[i], g2[i], 1e-14);
}

TEST(FromParams, HalfTwo) {
    const Basis2D b = from_params(0.5, 2.0);
    expect_vec(b.u1, {1 / std::sqrt(2.0), 0});
    expect_vec(b.u2, {1 / (2 * std::sqrt(2.0)), std::sqrt(2.0)});
    EXPECT_NEAR(b.covolume(), 1.0, 1e-15);
}

TEST(FromParams, RejectsOutsideDomain) {
    EXPECT_THROW(from_params(0.2, 0.5), DomainError);
    EXPECT_THROW(from_params(0.6, 2.0), DomainError);
    EXPECT_THROW(from_params(-0.1, 2.0), DomainError);
    EXPECT_NO_THROW(from_params(0.5, kS3 / 2));  // corner is inclusive
}

TEST(FromParams, CovolumeIsOne) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng);
        EXPECT_NEAR(from_params(x, y).covolume(), 1.0, 1e-14);
    }
}

TEST(Reduce, IdentityBasis) {
    const Reduction r = reduce(Basis2D{{1, 0}, {0, 1}});
    EXPECT_NEAR(r.params.x, 0.0, 1e-15);
    EXPECT_NEAR(r.params.y, 1.0, 1e-15);
    EXPECT_NEAR(r.params.scale, 1.0, 1e-15);
}

TEST(Reduce, RectangleTwoByHalf) {
    const Basis2D b{{2, 0}, {0, 0.5}};
    const Reduction r = reduce(b);
    EXPECT_NEAR(r.params.x, 0.0, 1e-12);
    EXPECT_NEAR(r.params.y, 4.0, 1e-12);
    EXPECT_NEAR(r.params.scale, 1.0, 1e-15);
    // Oracle: 1/sqrt(y) is the brute-force shortest vector.
    EXPECT_NEAR(1.0 / std::sqrt(r.params.y), brute_shortest(b), 1e-12);
}

TEST(Reduce, TriangularBasis) {
    const double a = std::sqrt(2.0 / kS3);
    const Reduction r = reduce(Basis2D{{a, 0}, {a / 2, a * kS3 / 2}});
    EXPECT_NEAR(r.params.x, 0.5, 1e-12);
    EXPECT_NEAR(r.params.y, kS3 / 2, 1e-12);
    EXPECT_NEAR(r.params.scale, 1.0, 1e-14);
}

TEST(Reduce, DegenerateBasisThrows) {
    EXPECT_THROW(reduce(Basis2D{{1, 2}, {2, 4}}), DegenerateBasisError);
    EXPECT_THROW(reduce(Basis2D{{1, 0}, {1, 1e-14}}), DegenerateBasisError);
}

TEST(Reduce, RoundTripsFromParams) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 500; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng);
        const Reduction r = reduce(from_params(x, y));
        EXPECT_LE(metric(r.params, {x, y, 1.0}), 1e-12) << x << " " << y;
    }
}

TEST(Reduce, ReconstructGeneratesInputLattice) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Basis2D b{{u(rng), u(rng)}, {u(rng), u(rng)}};
        if (b.covolume() < 1e-3) continue;
        const Reduction r = reduce(b);
        EXPECT_TRUE(in_fundamental_domain(r.params, 1e-12));
        EXPECT_NEAR(r.params.scale, b.covolume(), 1e-12 * b.covolume());
        EXPECT_TRUE(same_lattice(reconstruct(r), b));
    }
}

TEST(Reduce, ShortestVectorMatchesBruteForce) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Basis2D b{{u(rng), u(rng)}, {u(rng), u(rng)}};
        if (b.covolume() < 0.05) continue;
        const Reduction r = reduce(b);
        EXPECT_NEAR(std::sqrt(r.params.scale / r.params.y), brute_shortest(b, 60), 1e-10);
    }
}

TEST(Dual, SquareIsSelfDual) {
    const LatticeParams d = dual({0, 1, 1});
    EXPECT_NEAR(d.x, 0.0, 1e-14);
    EXPECT_NEAR(d.y, 1.0, 1e-14);
}

TEST(Dual, TriangularIsSelfDual) {
    const LatticeParams d = dual(triangular_lattice());
    EXPECT_NEAR(d.x, 0.5, 1e-14);
    EXPECT_NEAR(d.y, kS3 / 2, 1e-14);
}

TEST(Dual, RectangleFourMapsToItself) {
    const LatticeParams d = dual({0, 4, 1});
    EXPECT_NEAR(d.x, 0.0, 1e-14);
    EXPECT_NEAR(d.y, 4.0, 1e-12);
    EXPECT_NEAR(d.scale, 1.0, 1e-14);
}

TEST(Dual, Involution) {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 300; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng);
        const LatticeParams dd = dual(dual({x, y, 1.0}));
        EXPECT_LE(metric(dd, {x, y, 1.0}), 1e-12);
    }
}

TEST(Dual, DualBasisPairsToIntegers) {
    const Basis2D b = from_params(0.3, 1.7);
    const Basis2D d = b.dual();
    EXPECT_NEAR(dot(b.u1, d.u1), 1.0, 1e-15);
    EXPECT_NEAR(dot(b.u2, d.u2), 1.0, 1e-15);
    EXPECT_NEAR(dot(b.u1, d.u2), 0.0, 1e-15);
    EXPECT_NEAR(dot(b.u2, d.u1), 0.0, 1e-15);
}

TEST(Metric, ZeroOnDiagonal) {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 50; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng);
        EXPECT_EQ(metric({x, y, 1}, {x, y, 1}), 0.0);
        EXPECT_EQ(metric_paper({x, y, 1}, {x, y, 1}), 0.0);
    }
}

TEST(Metric, PaperVariantExamples) {
    EXPECT_NEAR(metric_paper({0, 1, 1}, {0, 2, 1}), 1.0, 1e-15);
    EXPECT_NEAR(metric_paper({0.1, 1, 1}, {0.45, 1, 1}), 0.15, 1e-15);
    // Period 1/2 identifies two distinct lattices; the corrected metric does not.
    EXPECT_NEAR(metric_paper({0, 1, 1}, {0.5, 1, 1}), 0.0, 1e-15);
    EXPECT_NEAR(metric({0, 1, 1}, {0.5, 1, 1}), 0.5, 1e-15);
}

TEST(Metric, CorrectedIsAMetricOnD) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        const auto [x1, y1] = test_support::random_domain_point(rng);
        const auto [x2, y2] = test_support::random_domain_point(rng);
        const auto [x3, y3] = test_support::random_domain_point(rng);
        const LatticeParams a{x1, y1, 1}, b{x2, y2, 1}, c{x3, y3, 1};
        EXPECT_DOUBLE_EQ(metric(a, b), metric(b, a));
        EXPECT_LE(metric(a, c), metric(a, b) + metric(b, c) + 1e-15);
        EXPECT_GT(metric(a, b), 0.0);
    }
}

TEST(Shells, SquareRadiusOne) {
    const ShellEnumeration s = enumerate_shells(square_lattice(), 1.0);
    ASSERT_EQ(s.count(), 4u);
    std::set<std::pair<long, long>> got;
    for (const auto& p : s.points) got.insert({p.m, p.n});
    EXPECT_EQ(got, (std::set<std::pair<long, long>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
}

TEST(Shells, SquareRadiusOneAndHalf) {
    EXPECT_EQ(enumerate_shells(square_lattice(), 1.5).count(), box_scan(from_params(0, 1), 1.5, 2).size());
    EXPECT_EQ(enumerate_shells(square_lattice(), 1.5).count(), 8u);
}

TEST(Shells, TriangularFirstShell) {
    const ShellEnumeration s = enumerate_shells(triangular_lattice(), 1.1);
    ASSERT_EQ(s.count(), 6u);
    for (const auto& p : s.points) EXPECT_NEAR(p.norm2, 2.0 / kS3, 1e-14);
}

TEST(Shells, MatchBruteForceOnRandomLattices) {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> ur(0.5, 5.0);
    for (int i = 0; i < 50; ++i) {
        const auto [x, y] = test_support::random_domain_point(rng, 6.0);
        const double r = ur(rng);
        const Basis2D b = from_params(x, y);
        const ShellEnumeration s = enumerate_shells(b, r);
        std::set<std::pair<long, long>> got;
        for (const auto& p : s.points) got.insert({p.m, p.n});
        EXPECT_EQ(got.size(), s.count());
        EXPECT_EQ(got, box_scan(b, r, 40)) << "x=" << x << " y=" << y << " R=" << r;
    }
}

TEST(Shells, ClosedUnderNegationAndSorted) {
    const ShellEnumeration s = enumerate_shells(LatticeParams{0.21, 1.3, 1}, 4.0);
    std::set<std::pair<long, long>> got;
    for (const auto& p : s.points) got.insert({p.m, p.n});
    for (const auto& [m, n] : got) EXPECT_TRUE(got.count({-m, -n}));
    for (std::size_t i = 1; i < s.count(); ++i) EXPECT_LE(s.points[i - 1].norm2, s.points[i].norm2);
}

TEST(Shells, CapRaisesResourceError) {
    EXPECT_THROW(enumerate_shells(square_lattice(), 100.0, 1000), ResourceError);
    EXPECT_THROW(enumerate_shells(square_lattice(), -1.0), DomainError);
}
