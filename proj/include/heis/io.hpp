#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "heis/delta_sets.hpp"
#include "heis/discrete_measure.hpp"
#include "heis/errors.hpp"
#include "heis/rng.hpp"

namespace heis {

// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t b = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > b) out.push_back(line.substr(b, i - b));
    }
    return out;
}

inline double parse_double(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad number '" + std::string(s) + "'", line);
    return v;
}

inline std::uint64_t parse_count(std::string_view s, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad count '" + std::string(s) + "'", line);
    return v;
}

// Next line that is neither blank nor a '#' comment.
inline bool next_record(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        const auto f = line.find_first_not_of(" \t\r");
        if (f == std::string::npos || line[f] == '#') continue;
        return true;
    }
    return false;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write '" + path + "'");
    return out;
}

}  // namespace detail

// header: delta t C count, then x y t per ball
inline void write_ball_family(std::ostream& out, const BallFamily& F) {
    out << format_double(F.delta) << ' ' << format_double(F.claimed_t) << ' ' << format_double(F.claimed_C) << ' '
        << F.size() << '\n';
    for (const auto& c : F.centers)
        out << format_double(c.x) << ' ' << format_double(c.y) << ' ' << format_double(c.t) << '\n';
}

inline BallFamily read_ball_family(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_record(in, line, lineno)) throw ParseError("missing header", lineno);
    auto h = detail::split_fields(line);
    if (h.size() != 4) throw ParseError("header needs 'delta t C count'", lineno);
    BallFamily F;
    F.delta = detail::parse_double(h[0], lineno);
    F.claimed_t = detail::parse_double(h[1], lineno);
    F.claimed_C = detail::parse_double(h[2], lineno);
    const auto n = detail::parse_count(h[3], lineno);
    if (!(F.delta > 0.0)) throw ParseError("delta must be positive", lineno);
    F.centers.reserve(n);
    while (F.centers.size() < n) {
        if (!detail::next_record(in, line, lineno)) throw ParseError("file ends before all balls were read", lineno);
        auto f = detail::split_fields(line);
        if (f.size() != 3) throw ParseError("ball line needs 'x y t'", lineno);
        const double x = detail::parse_double(f[0], lineno), y = detail::parse_double(f[1], lineno),
                     t = detail::parse_double(f[2], lineno);
        try {
            F.centers.emplace_back(x, y, t);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (detail::next_record(in, line, lineno)) throw ParseError("trailing data after last ball", lineno);
    return F;
}

inline void save_ball_family(const std::string& path, const BallFamily& F) {
    auto out = detail::open_out(path);
    write_ball_family(out, F);
}

inline BallFamily load_ball_family(const std::string& path) {
    auto in = detail::open_in(path);
    return read_ball_family(in);
}

// header: count total_mass, then x y t w per atom
inline void write_measure(std::ostream& out, const DiscreteMeasure& mu) {
    out << mu.size() << ' ' << format_double(mu.total_mass()) << '\n';
    for (const auto& a : mu.atoms())
        out << format_double(a.p.x) << ' ' << format_double(a.p.y) << ' ' << format_double(a.p.t) << ' '
            << format_double(a.w) << '\n';
}

inline DiscreteMeasure read_measure(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_record(in, line, lineno)) throw ParseError("missing header", lineno);
    auto h = detail::split_fields(line);
    if (h.size() != 2) throw ParseError("header needs 'count total_mass'", lineno);
    const auto n = detail::parse_count(h[0], lineno);
    const double stated = detail::parse_double(h[1], lineno);
    std::vector<Atom> atoms;
    atoms.reserve(n);
    while (atoms.size() < n) {
        if (!detail::next_record(in, line, lineno)) throw ParseError("file ends before all atoms were read", lineno);
        auto f = detail::split_fields(line);
        if (f.size() != 4) throw ParseError("atom line needs 'x y t w'", lineno);
        try {
            atoms.push_back({HeisPoint(detail::parse_double(f[0], lineno), detail::parse_double(f[1], lineno),
                                       detail::parse_double(f[2], lineno)),
                             detail::parse_double(f[3], lineno)});
        } catch (const DomainError& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (detail::next_record(in, line, lineno)) throw ParseError("trailing data after last atom", lineno);
    try {
        DiscreteMeasure mu(std::move(atoms));
        if (std::abs(mu.total_mass() - stated) > 1e-9 * std::max(1.0, std::abs(stated)))
            throw ParseError("total mass does not match the atoms", 1);
        return mu;
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

struct ManifestEntry {
    std::string name;
    double value = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string oracle;
};

// One entry per line: name value samples seed oracle-description (rest of line).
inline void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries) {
    out << "# name value samples seed oracle\n";
    for (const auto& e : entries)
        out << e.name << ' ' << format_double(e.value) << ' ' << e.samples << ' ' << e.seed << ' ' << e.oracle << '\n';
}

inline std::vector<ManifestEntry> read_manifest(std::istream& in) {
    std::vector<ManifestEntry> out;
    std::string line;
    std::size_t lineno = 0;
    while (detail::next_record(in, line, lineno)) {
        std::istringstream ls(line);
        std::string name, value, samples, seed;
        if (!(ls >> name >> value >> samples >> seed)) throw ParseError("manifest line needs name value samples seed", lineno);
        ManifestEntry e;
        e.name = name;
        e.value = detail::parse_double(value, lineno);
        e.samples = detail::parse_count(samples, lineno);
        e.seed = detail::parse_count(seed, lineno);
        std::getline(ls >> std::ws, e.oracle);
        out.push_back(std::move(e));
    }
    return out;
}

inline const ManifestEntry& manifest_get(const std::vector<ManifestEntry>& m, std::string_view name) {
    for (const auto& e : m)
        if (e.name == name) return e;
    throw DomainError("manifest has no entry '" + std::string(name) + "'");
}

// FNV-1a of the file bytes, as 16 hex digits; "none" if the file is missing.
inline std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "none";
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_key(ss.str())));
    return buf;
}

}  // namespace heis
