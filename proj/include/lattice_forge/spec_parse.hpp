#pragma once

// Text specs for potentials and measures:
//   gaussian:alpha=<f> | invpower:a=<f>,s=<f> | laplace:atoms=[(t,w),...]
//   dirac | disk:r=<f> | gauss:sigma=<f> | profile:file=<path>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lattice_forge/errors.hpp"
#include "lattice_forge/measure.hpp"
#include "lattice_forge/potential.hpp"

namespace lattice_forge {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view text) {
    const std::string_view t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ParseError("expected a number, got '" + std::string(text) + "'", std::string(text));
    }
    return v;
}

/// "k1=v1,k2=v2" with no nested commas.
inline std::map<std::string, std::string> parse_fields(std::string_view body) {
    std::map<std::string, std::string> out;
    while (!body.empty()) {
        const std::size_t comma = body.find(',');
        const std::string_view item = body.substr(0, comma);
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key=value, got '" + std::string(item) + "'", std::string(item));
        }
        out[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return out;
}

inline double require(const std::map<std::string, std::string>& f, const std::string& key, std::string_view spec) {
    const auto it = f.find(key);
    if (it == f.end()) throw ParseError("missing '" + key + "' in '" + std::string(spec) + "'", key);
    return parse_number(it->second);
}

inline void only_keys(const std::map<std::string, std::string>& f, std::initializer_list<std::string> keys) {
    for (const auto& [k, v] : f) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ParseError("unknown key '" + k + "'", k);
    }
}

inline std::pair<std::string_view, std::string_view> split_head(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos) return {trim(spec), {}};
    return {trim(spec.substr(0, colon)), spec.substr(colon + 1)};
}

/// "[(t,w),(t,w)]"
inline std::vector<Node> parse_atoms(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw ParseError("atoms must be written [(t,w),...], got '" + std::string(text) + "'", std::string(text));
    }
    s = s.substr(1, s.size() - 2);
    std::vector<Node> atoms;
    while (!trim(s).empty()) {
        s = trim(s);
        if (s.front() != '(') throw ParseError("expected '(' at '" + std::string(s) + "'", std::string(s));
        const std::size_t close = s.find(')');
        if (close == std::string_view::npos) throw ParseError("unclosed '(' in atoms", std::string(s));
        const std::string_view pair = s.substr(1, close - 1);
        const std::size_t comma = pair.find(',');
        if (comma == std::string_view::npos) throw ParseError("atom needs (t,w): '" + std::string(pair) + "'", std::string(pair));
        atoms.push_back({parse_number(pair.substr(0, comma)), parse_number(pair.substr(comma + 1))});
        s.remove_prefix(close + 1);
        s = trim(s);
        if (!s.empty()) {
            if (s.front() != ',') throw ParseError("expected ',' between atoms at '" + std::string(s) + "'", std::string(s));
            s.remove_prefix(1);
        }
    }
    if (atoms.empty()) throw ParseError("laplace needs at least one atom", std::string(text));
    return atoms;
}

inline RadialPotential parse_potential_unchecked(std::string_view spec) {
    const auto [head, body] = detail::split_head(spec);
    if (head == "gaussian") {
        const auto f = detail::parse_fields(body);
        detail::only_keys(f, {"alpha"});
        return gaussian(detail::require(f, "alpha", spec));
    }
    if (head == "invpower") {
        const auto f = detail::parse_fields(body);
        detail::only_keys(f, {"a", "s"});
        return inverse_power(detail::require(f, "a", spec), detail::require(f, "s", spec));
    }
    if (head == "laplace") {
        const std::string_view b = detail::trim(body);
        if (b.substr(0, 6) != "atoms=") throw ParseError("laplace expects atoms=[...]", std::string(b));
        return laplace(detail::parse_atoms(b.substr(6)));
    }
    throw ParseError("unknown potential '" + std::string(head) + "'", std::string(head));
}

}  // namespace detail

/// Rows "s,density"; blank lines and lines starting with '#' are skipped, as is
/// a first row that does not parse as numbers (a header).
inline RadialMeasure read_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profile file '" + path + "'", path);
    std::vector<double> s;
    std::vector<double> d;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const std::string_view l = detail::trim(line);
        if (l.empty() || l.front() == '#') continue;
        const std::size_t comma = l.find(',');
        if (comma == std::string_view::npos) throw ParseError("profile row needs 's,density': '" + std::string(l) + "'", std::string(l));
        try {
            const double sv = detail::parse_number(l.substr(0, comma));
            const double dv = detail::parse_number(l.substr(comma + 1));
            s.push_back(sv);
            d.push_back(dv);
        } catch (const ParseError&) {
            if (!first) throw;
        }
        first = false;
    }
    try {
        return RadialMeasure::profile(s, d);
    } catch (const DomainError& e) {
        throw ParseError(std::string("invalid profile '") + path + "': " + e.what(), path);
    }
}

namespace detail {

inline RadialMeasure parse_measure_unchecked(std::string_view spec) {
    const auto [head, body] = detail::split_head(spec);
    if (head == "dirac") {
        if (!detail::trim(body).empty()) throw ParseError("dirac takes no parameters", std::string(body));
        return RadialMeasure::dirac();
    }
    if (head == "disk") {
        const auto f = detail::parse_fields(body);
        detail::only_keys(f, {"r"});
        return RadialMeasure::uniform_disk(detail::require(f, "r", spec));
    }
    if (head == "gauss") {
        const auto f = detail::parse_fields(body);
        detail::only_keys(f, {"sigma"});
        return RadialMeasure::radial_gaussian(detail::require(f, "sigma", spec));
    }
    if (head == "profile") {
        const std::string_view b = detail::trim(body);
        if (b.substr(0, 5) != "file=") throw ParseError("profile expects file=<path>", std::string(b));
        return read_profile(std::string(b.substr(5)));
    }
    throw ParseError("unknown measure '" + std::string(head) + "'", std::string(head));
}

}  // namespace detail

/// Out-of-range parameters (alpha <= 0, s <= 1, ...) are reported as parse
/// errors naming the spec.
inline RadialPotential parse_potential(std::string_view spec) {
    try {
        return detail::parse_potential_unchecked(spec);
    } catch (const DomainError& e) {
        throw ParseError(std::string(e.what()), std::string(spec));
    }
}

inline RadialMeasure parse_measure(std::string_view spec) {
    try {
        return detail::parse_measure_unchecked(spec);
    } catch (const DomainError& e) {
        throw ParseError(std::string(e.what()), std::string(spec));
    }
}

}  // namespace lattice_forge
