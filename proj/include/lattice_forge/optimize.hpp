#pragma once

// Minimization of lattice energies E(x, y) over the fundamental domain D:
// a uniform scan, a Nelder-Mead search kept inside D by projection, and a
// multi-start driver combining the two.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice.hpp"
#include "lattice_forge/parallel.hpp"

namespace lattice_forge {

using Objective = std::function<double(double, double)>;

struct GridPoint {
    double x = 0.0;
    double y = 0.0;
    double energy = 0.0;
};

struct Landscape {
    /// Row-major: x index outer, y index inner.
    std::vector<GridPoint> grid;
    std::array<double, 2> x_range{0.0, 0.5};
    std::array<double, 2> y_range{0.0, 0.0};
    std::size_t x_steps = 0;
    std::size_t y_steps = 0;
    GridPoint argmin;
    /// min over the y = y_max row minus the grid minimum; positive when the
    /// truncation at y_max is harmless.
    double y_max_margin = 0.0;
};

/// Lower boundary of D above x.
inline double y_min_of(double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); }

inline Landscape grid_scan(const Objective& e, std::size_t x_steps, std::size_t y_steps, double y_max) {
    if (x_steps < 2 || y_steps < 2) throw DomainError("grid_scan: need at least 2 steps per axis");
    if (!(y_max > 1.0)) throw DomainError("grid_scan: y_max must exceed 1");
    Landscape out;
    out.x_steps = x_steps;
    out.y_steps = y_steps;
    out.y_range = {y_min_of(0.5), y_max};
    out.grid.resize(x_steps * y_steps);
    for (std::size_t i = 0; i < x_steps; ++i) {
        const double x = 0.5 * static_cast<double>(i) / static_cast<double>(x_steps - 1);
        const double y0 = y_min_of(x);
        for (std::size_t j = 0; j < y_steps; ++j) {
            const double y = y0 + (y_max - y0) * static_cast<double>(j) / static_cast<double>(y_steps - 1);
            out.grid[i * y_steps + j] = {x, y, 0.0};
        }
    }
    const auto values = parallel_map(out.grid.size(), [&](std::size_t k) { return e(out.grid[k].x, out.grid[k].y); });
    double top = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.grid.size(); ++k) {
        out.grid[k].energy = values[k];
        // Strict comparison in (x, y) order keeps the lexicographically first minimum.
        if (k == 0 || values[k] < out.argmin.energy) out.argmin = out.grid[k];
        if (k % y_steps == y_steps - 1) top = std::min(top, values[k]);
    }
    out.y_max_margin = top - out.argmin.energy;
    return out;
}

struct MinimizeResult {
    double x = 0.0;
    double y = 0.0;
    double energy = 0.0;
    /// Corrected metric to (1/2, sqrt3/2).
    double dist_to_triangular = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct LocalOptions {
    double tol = 1e-8;
    std::size_t max_iter = 2000;
    double initial_step = 0.05;
    /// Restarts from the best vertex; a simplex flattened against the boundary
    /// of D can otherwise stall short of a corner minimum.
    int restarts = 6;
};

/// Closest-ish point of D: clamp x to [0, 1/2], then lift y onto the arc.
inline std::array<double, 2> project_to_domain(double x, double y) {
    x = std::clamp(x, 0.0, 0.5);
    return {x, std::max(y, y_min_of(x))};
}

inline MinimizeResult local_minimize(const Objective& e, double x0, double y0, const LocalOptions& opt = {}) {
    if (!in_fundamental_domain(x0, y0, 1e-9)) {
        throw DomainError("local_minimize: start (" + std::to_string(x0) + ", " + std::to_string(y0) +
                          ") is outside D");
    }
    using P = std::array<double, 2>;
    struct Vertex {
        P p;
        double f;
    };
    auto eval = [&](P p) {
        p = project_to_domain(p[0], p[1]);
        return Vertex{p, e(p[0], p[1])};
    };
    auto dist = [](const P& a, const P& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); };

    std::size_t iterations = 0;
    Vertex best = eval(project_to_domain(x0, y0));
    double step = opt.initial_step;
    bool converged = false;

    for (int round = 0; round <= opt.restarts; ++round) {
        std::array<Vertex, 3> s;
        s[0] = best;
        for (int axis = 0; axis < 2; ++axis) {
            P q = best.p;
            q[axis] += step;
            Vertex v = eval(q);
            if (dist(v.p, best.p) < 0.5 * step) {
                q = best.p;
                q[axis] -= step;
                v = eval(q);
            }
            s[axis + 1] = v;
        }
        bool done = false;
        while (!done) {
            std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
            const double diam = std::max({dist(s[0].p, s[1].p), dist(s[0].p, s[2].p), dist(s[1].p, s[2].p)});
            if (diam < opt.tol) {
                done = true;
                break;
            }
            if (++iterations > opt.max_iter) {
                throw ConvergenceError("local_minimize: no convergence within " + std::to_string(opt.max_iter) +
                                       " iterations");
            }
            const P c{0.5 * (s[0].p[0] + s[1].p[0]), 0.5 * (s[0].p[1] + s[1].p[1])};
            auto along = [&](double a) { return P{c[0] + a * (s[2].p[0] - c[0]), c[1] + a * (s[2].p[1] - c[1])}; };
            const Vertex r = eval(along(-1.0));
            if (r.f < s[0].f) {
                const Vertex ex = eval(along(-2.0));
                s[2] = ex.f < r.f ? ex : r;
            } else if (r.f < s[1].f) {
                s[2] = r;
            } else {
                const Vertex ct = r.f < s[2].f ? eval(along(-0.5)) : eval(along(0.5));
                if (ct.f < std::min(r.f, s[2].f)) {
                    s[2] = ct;
                } else {
                    for (int k = 1; k < 3; ++k) {
                        s[k] = eval({0.5 * (s[0].p[0] + s[k].p[0]), 0.5 * (s[0].p[1] + s[k].p[1])});
                    }
                }
            }
        }
        const bool moved = dist(s[0].p, best.p) >= opt.tol;
        if (s[0].f <= best.f) best = s[0];
        converged = true;
        if (!moved && round > 0) break;
        step = std::max(10.0 * opt.tol, 0.1 * step);
    }

    MinimizeResult out;
    out.x = best.p[0];
    out.y = best.p[1];
    out.energy = best.f;
    out.dist_to_triangular = metric({out.x, out.y, 1.0}, triangular_lattice());
    out.iterations = iterations;
    out.converged = converged;
    return out;
}

struct GlobalConfig {
    std::size_t x_steps = 26;
    std::size_t y_steps = 40;
    double y_max = 4.0;
    std::size_t seeds = 5;
    LocalOptions local;
};

struct GlobalResult {
    MinimizeResult best;
    /// Every refined candidate, in seed order (best grid cell first).
    std::vector<MinimizeResult> certificate;
    Landscape landscape;
};

inline GlobalResult global_minimize(const Objective& e, const GlobalConfig& cfg = {}) {
    GlobalResult out;
    out.landscape = grid_scan(e, cfg.x_steps, cfg.y_steps, cfg.y_max);
    const auto& g = out.landscape.grid;
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Stable sort keeps the (x, y) order among ties.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g[a].energy < g[b].energy; });
    order.resize(std::min(cfg.seeds, order.size()));

    out.certificate = parallel_map(order.size(), [&](std::size_t k) {
        const GridPoint& s = g[order[k]];
        return local_minimize(e, s.x, s.y, cfg.local);
    });
    out.best = out.certificate.front();
    for (const auto& c : out.certificate) {
        if (c.energy < out.best.energy) out.best = c;
    }
    return out;
}

}  // namespace lattice_forge
