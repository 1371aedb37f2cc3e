// lattice-forge: energies, theta values, landscapes, stability curves and
// minimizers of 2D Bravais lattices from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lattice_forge/energy.hpp"
#include "lattice_forge/errors.hpp"
#include "lattice_forge/lattice.hpp"
#include "lattice_forge/optimize.hpp"
#include "lattice_forge/output.hpp"
#include "lattice_forge/spec_parse.hpp"
#include "lattice_forge/stability.hpp"

namespace lf = lattice_forge;
using nlohmann::ordered_json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitConvergence = 3;

struct Options {
    std::string potential = "gaussian:alpha=3.141592653589793";
    std::string measure = "dirac";
    std::string lattice = "0.5,0.8660254037844386";
    std::string output;
    std::string format;
    std::string svg;
    double rtol = 1e-14;
    double t = 1.0;
    std::string z = "0,0";
    std::string eps = "0:5:0.01";
    std::size_t x_steps = 26;
    std::size_t y_steps = 40;
    double y_max = 4.0;
    std::size_t seeds = 5;
    double tol = 1e-8;
};

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw lf::ParseError(std::string(what) + " must be written a,b; got '" + text + "'", text);
    }
    return {lf::detail::parse_number(std::string_view(text).substr(0, comma)),
            lf::detail::parse_number(std::string_view(text).substr(comma + 1))};
}

lf::LatticeParams parse_lattice(const std::string& text) {
    const auto [x, y] = parse_pair(text, "--lattice");
    if (!(y > 0.0)) throw lf::ParseError("--lattice needs y > 0, got '" + text + "'", text);
    return {x, y, 1.0};
}

/// "a:b:step" or a single value.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string_view> parts;
    std::string_view rest = text;
    for (auto c = rest.find(':'); c != std::string_view::npos; c = rest.find(':')) {
        parts.push_back(rest.substr(0, c));
        rest.remove_prefix(c + 1);
    }
    parts.push_back(rest);
    if (parts.size() == 1) return {lf::detail::parse_number(parts[0])};
    if (parts.size() != 3) throw lf::ParseError("--eps must be a:b:step or a single value, got '" + text + "'", text);
    const double a = lf::detail::parse_number(parts[0]);
    const double b = lf::detail::parse_number(parts[1]);
    const double h = lf::detail::parse_number(parts[2]);
    if (!(h > 0.0) || !(b >= a) || a < 0.0) throw lf::ParseError("invalid --eps range '" + text + "'", text);
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
    std::vector<double> grid;
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(a + h * static_cast<double>(i));
    return grid;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw lf::ParseError(std::string(name) + " must be positive", std::to_string(v));
    }
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw lf::Error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const Options& o, const ordered_json& j) {
    Sink s(o.output);
    s.stream() << j.dump(2) << '\n';
}

void emit_csv(const Options& o, const std::vector<std::string>& cols, const std::vector<std::vector<double>>& rows) {
    Sink s(o.output);
    lf::write_csv(s.stream(), cols, rows);
}

std::string format_or(const Options& o, const char* fallback) {
    const std::string f = o.format.empty() ? fallback : o.format;
    if (f != "json" && f != "csv" && f != "svg") throw lf::ParseError("unknown --format '" + f + "'", f);
    return f;
}

ordered_json lattice_json(const lf::LatticeParams& l) { return {{"x", l.x}, {"y", l.y}}; }

ordered_json to_json(const lf::MinimizeResult& r) {
    return {{"x", r.x},
            {"y", r.y},
            {"energy", r.energy},
            {"dist_to_triangular", r.dist_to_triangular},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

int cmd_energy(const Options& o) {
    const auto p = lf::parse_potential(o.potential);
    const auto mu = lf::parse_measure(o.measure);
    const auto l = parse_lattice(o.lattice);
    require_positive(o.rtol, "--rtol");
    const lf::EnergyReport r = lf::diffuse_energy(p, mu, l, o.rtol);
    if (format_or(o, "json") == "csv") {
        emit_csv(o, {"x", "y", "value", "lattice_part", "constant_part", "cutoff_R", "tail_bound", "terms_used"},
                 {{l.x, l.y, r.value, r.lattice_part, r.constant_part, r.cutoff_R, r.tail_bound,
                   static_cast<double>(r.terms_used)}});
        return 0;
    }
    emit_json(o, {{"command", "energy"},
                  {"potential", p.description()},
                  {"measure", mu.description()},
                  {"lattice", lattice_json(l)},
                  {"value", r.value},
                  {"lattice_part", r.lattice_part},
                  {"constant_part", r.constant_part},
                  {"cutoff_R", r.cutoff_R},
                  {"tail_bound", r.tail_bound},
                  {"terms_used", r.terms_used}});
    return 0;
}

int cmd_theta(const Options& o) {
    const auto l = parse_lattice(o.lattice);
    require_positive(o.t, "--t");
    const lf::TruncatedSum s = lf::theta_sum(lf::to_basis(l), o.t);
    if (format_or(o, "json") == "csv") {
        emit_csv(o, {"x", "y", "t", "value"}, {{l.x, l.y, o.t, s.value}});
        return 0;
    }
    emit_json(o, {{"command", "theta"},
                  {"lattice", lattice_json(l)},
                  {"t", o.t},
                  {"value", s.value},
                  {"cutoff_R", s.cutoff},
                  {"tail_bound", s.tail_bound},
                  {"terms_used", s.terms}});
    return 0;
}

lf::Objective energy_objective(const lf::DiffuseEnergy& e) {
    return [&e](double x, double y) { return e.lattice_part({x, y, 1.0}); };
}

int cmd_scan(const Options& o) {
    const lf::DiffuseEnergy e(lf::parse_potential(o.potential), lf::parse_measure(o.measure), {o.rtol, 0.0});
    require_positive(o.y_max, "--y-max");
    const lf::Landscape land = lf::grid_scan(energy_objective(e), o.x_steps, o.y_steps, o.y_max);
    // Reported energies include the lattice-independent constant.
    const double c = e.constant_part();
    if (format_or(o, "csv") == "json") {
        ordered_json grid = ordered_json::array();
        for (const auto& g : land.grid) grid.push_back({g.x, g.y, g.energy + c});
        emit_json(o, {{"command", "scan"},
                      {"potential", e.potential().description()},
                      {"measure", e.measure().description()},
                      {"x_range", land.x_range},
                      {"y_range", land.y_range},
                      {"resolution", {land.x_steps, land.y_steps}},
                      {"argmin", {{"x", land.argmin.x}, {"y", land.argmin.y}, {"energy", land.argmin.energy + c}}},
                      {"y_max_margin", land.y_max_margin},
                      {"grid", grid}});
        return 0;
    }
    std::vector<std::vector<double>> rows;
    for (const auto& g : land.grid) rows.push_back({g.x, g.y, g.energy + c});
    emit_csv(o, {"x", "y", "energy"}, rows);
    return 0;
}

int cmd_stability(const Options& o) {
    const lf::DiffuseStability s(lf::parse_potential(o.potential), lf::parse_measure(o.measure));
    const std::vector<double> grid = parse_grid(o.eps);
    const std::string fmt = format_or(o, "csv");

    if (grid.size() == 1) {
        const lf::StabilityReport r = lf::stability_report(s, grid[0]);
        if (fmt == "json") {
            emit_json(o, {{"command", "stability"},
                          {"potential", s.potential_description()},
                          {"measure", s.measure().description()},
                          {"eps", r.eps},
                          {"T_analytic", r.T_analytic},
                          {"grad_fd", r.grad_fd},
                          {"hessian_fd", r.hessian_fd},
                          {"classification", lf::to_string(r.classification)}});
        } else {
            emit_csv(o, {"eps", "T", "grad_x", "grad_y", "hess_xx", "hess_xy", "hess_yy"},
                     {{r.eps, r.T_analytic, r.grad_fd[0], r.grad_fd[1], r.hessian_fd[0][0], r.hessian_fd[0][1],
                       r.hessian_fd[1][1]}});
        }
        return 0;
    }

    const lf::StabilityCurve curve = lf::stability_curve(s, grid);
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : curve.points) pts.emplace_back(p.eps, p.T);
    const std::string svg =
        lf::render_svg(pts, {640, 400, 56, "eps", "T", "T of h_eps at the triangular lattice"});
    if (!o.svg.empty()) {
        std::ofstream f(o.svg);
        if (!f) throw lf::Error("cannot open svg file '" + o.svg + "'");
        f << svg;
    }
    if (fmt == "svg") {
        Sink out(o.output);
        out.stream() << svg;
    } else if (fmt == "json") {
        ordered_json pj = ordered_json::array();
        for (const auto& p : curve.points) pj.push_back({{"eps", p.eps}, {"T", p.T}});
        emit_json(o, {{"command", "stability"},
                      {"potential", s.potential_description()},
                      {"measure", s.measure().description()},
                      {"points", pj},
                      {"sign_changes", curve.sign_changes}});
    } else {
        std::vector<std::vector<double>> rows;
        for (const auto& p : curve.points) rows.push_back({p.eps, p.T});
        emit_csv(o, {"eps", "T"}, rows);
    }
    return 0;
}

int cmd_minimize(const Options& o) {
    const lf::DiffuseEnergy e(lf::parse_potential(o.potential), lf::parse_measure(o.measure), {o.rtol, 0.0});
    require_positive(o.y_max, "--y-max");
    require_positive(o.tol, "--tol");
    lf::GlobalConfig cfg;
    cfg.x_steps = o.x_steps;
    cfg.y_steps = o.y_steps;
    cfg.y_max = o.y_max;
    cfg.seeds = o.seeds;
    cfg.local.tol = o.tol;
    lf::GlobalResult g = lf::global_minimize(energy_objective(e), cfg);
    const double c = e.constant_part();
    g.best.energy += c;
    for (auto& r : g.certificate) r.energy += c;

    if (format_or(o, "json") == "csv") {
        std::vector<std::vector<double>> rows;
        for (const auto& r : g.certificate) {
            rows.push_back({r.x, r.y, r.energy, r.dist_to_triangular, static_cast<double>(r.iterations),
                            r.converged ? 1.0 : 0.0});
        }
        emit_csv(o, {"x", "y", "energy", "dist_to_triangular", "iterations", "converged"}, rows);
        return 0;
    }
    ordered_json cert = ordered_json::array();
    for (const auto& r : g.certificate) cert.push_back(to_json(r));
    ordered_json j = {{"command", "minimize"},
                      {"potential", e.potential().description()},
                      {"measure", e.measure().description()}};
    const ordered_json best = to_json(g.best);
    for (auto it = best.begin(); it != best.end(); ++it) j[it.key()] = it.value();
    j["y_max_margin"] = g.landscape.y_max_margin;
    j["certificate"] = cert;
    emit_json(o, j);
    return 0;
}

int cmd_poisson(const Options& o) {
    const auto p = lf::parse_potential(o.potential);
    const auto l = parse_lattice(o.lattice);
    const auto [zx, zy] = parse_pair(o.z, "--z");
    const lf::PoissonCheck c = lf::poisson_check(p, l, {zx, zy});
    if (format_or(o, "json") == "csv") {
        emit_csv(o, {"lhs", "rhs", "diff"}, {{c.lhs, c.rhs, c.diff}});
        return 0;
    }
    emit_json(o, {{"command", "poisson-check"},
                  {"potential", p.description()},
                  {"lattice", lattice_json(l)},
                  {"z", {zx, zy}},
                  {"lhs", c.lhs},
                  {"rhs", c.rhs},
                  {"diff", c.diff}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice-forge: energies and stability of 2D Bravais lattices"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", o.output, "Output file (default stdout)");
        sub->add_option("--format", o.format, "json, csv or svg");
    };
    auto physics = [&](CLI::App* sub) {
        sub->add_option("--potential", o.potential, "gaussian:alpha=, invpower:a=,s=, laplace:atoms=[(t,w),...]");
        sub->add_option("--measure", o.measure, "dirac, disk:r=, gauss:sigma=, profile:file=");
    };

    auto* energy = app.add_subcommand("energy", "Diffuse-particle energy of one lattice");
    physics(energy);
    common(energy);
    energy->add_option("--lattice", o.lattice, "x,y");
    energy->add_option("--rtol", o.rtol, "Relative truncation tolerance");

    auto* theta = app.add_subcommand("theta", "Lattice theta function");
    common(theta);
    theta->add_option("--lattice", o.lattice, "x,y");
    theta->add_option("--t", o.t, "Argument t > 0");

    auto* scan = app.add_subcommand("scan", "Energy landscape over the fundamental domain");
    physics(scan);
    common(scan);
    scan->add_option("--x-steps", o.x_steps);
    scan->add_option("--y-steps", o.y_steps);
    scan->add_option("--y-max", o.y_max);
    scan->add_option("--rtol", o.rtol);

    auto* stability = app.add_subcommand("stability", "T coefficient at the triangular lattice versus eps");
    physics(stability);
    common(stability);
    stability->add_option("--eps", o.eps, "a:b:step, or one value for a full report");
    stability->add_option("--svg", o.svg, "Also write the curve as SVG");

    auto* minimize = app.add_subcommand("minimize", "Global minimizer over the fundamental domain");
    physics(minimize);
    common(minimize);
    minimize->add_option("--x-steps", o.x_steps);
    minimize->add_option("--y-steps", o.y_steps);
    minimize->add_option("--y-max", o.y_max);
    minimize->add_option("--seeds", o.seeds);
    minimize->add_option("--tol", o.tol, "Simplex diameter tolerance");
    minimize->add_option("--rtol", o.rtol);

    auto* poisson = app.add_subcommand("poisson-check", "Both sides of the Poisson summation formula");
    poisson->add_option("--potential", o.potential);
    common(poisson);
    poisson->add_option("--lattice", o.lattice, "x,y");
    poisson->add_option("--z", o.z, "Shift zx,zy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*energy) return cmd_energy(o);
        if (*theta) return cmd_theta(o);
        if (*scan) return cmd_scan(o);
        if (*stability) return cmd_stability(o);
        if (*minimize) return cmd_minimize(o);
        if (*poisson) return cmd_poisson(o);
    } catch (const lf::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const lf::ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
