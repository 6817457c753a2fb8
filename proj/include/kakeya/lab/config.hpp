// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/families.hpp"
#include "kakeya/rational.hpp"

namespace kakeya::lab {

// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Exact values as "p/q"; show() drops a unit denominator for human output.
inline std::string frac(const Rational& r) { return r.to_string(); }
inline std::string frac(const Dyadic& d) { return Rational(d).to_string(); }
inline std::string show(const Rational& r) {
    return r.denominator() == 1 ? r.numerator().str() : r.to_string();
}
inline std::string show(const Dyadic& d) { return show(Rational(d)); }
inline std::string eta_str(const std::optional<Dyadic>& e) { return e ? frac(*e) : std::string("unconstrained"); }

struct Strip {
    Dyadic x0, x1;
};

struct ExperimentConfig {
    FamilyKind family = FamilyKind::quarter_cantor;
    std::uint64_t n = 2;
    std::uint64_t n_min = 2;
    std::optional<std::uint64_t> depth;
    std::optional<std::uint64_t> order;
    std::vector<Dyadic> directions;   // overrides family when non-empty
    Dyadic eta = Dyadic::pow2(-1);
    std::uint64_t samples = 10000;
    std::uint64_t count = 1;          // sampled sigma per N
    std::uint64_t seed = 1;
    std::optional<Strip> strip;
    std::optional<std::pair<Dyadic, Dyadic>> point;
    std::uint64_t grid = 8;           // points per axis in scans
    std::string out = "out";
    bool check = false;
    double cap_enum = 1048576.0;
    std::uint64_t cap_depth = 64;
    unsigned threads = 1;

    // Sorted key=value lines of every setting that affects results.
    std::string canonical() const {
        std::map<std::string, std::string> kv;
        kv["family"] = to_string(family);
        kv["N"] = std::to_string(n);
        kv["N-min"] = std::to_string(n_min);
        kv["depth"] = depth ? std::to_string(*depth) : "";
        kv["order"] = order ? std::to_string(*order) : "";
        std::string dirs;
        for (std::size_t i = 0; i < directions.size(); ++i) dirs += (i ? "," : "") + frac(directions[i]);
        kv["directions"] = dirs;
        kv["eta"] = frac(eta);
        kv["samples"] = std::to_string(samples);
        kv["count"] = std::to_string(count);
        kv["seed"] = std::to_string(seed);
        kv["strip"] = strip ? frac(strip->x0) + "," + frac(strip->x1) : "";
        kv["point"] = point ? frac(point->first) + "," + frac(point->second) : "";
        kv["grid"] = std::to_string(grid);
        kv["check"] = check ? "1" : "0";
        kv["cap-enum"] = std::to_string(static_cast<unsigned long long>(cap_enum));
        kv["cap-depth"] = std::to_string(cap_depth);
        std::string s;
        for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
        return s;
    }

    // Thread count and output directory do not change results.
    std::string hash(const std::string& command = {}) const {
        return hex64(fnv1a64("command=" + command + "\n" + canonical()));
    }

    Family make_family(std::uint64_t param) const { return generate_family(family, param, depth); }
};

namespace detail {

inline std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        const unsigned long long r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return r;
    } catch (const std::exception&) {
        throw invalid_input("config: " + key + " expects a non-negative integer, got '" + v + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw invalid_input("config: " + key + " expects a boolean, got '" + v + "'");
}

} // namespace detail

// Applies one setting; keys are the long flag names without dashes.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
    const std::string v = detail::trim(raw);
    if (key == "family") {
        c.family = parse_family_kind(v);
    } else if (key == "N") {
        c.n = detail::parse_u64(key, v);
    } else if (key == "N-min") {
        c.n_min = detail::parse_u64(key, v);
    } else if (key == "depth") {
        c.depth = detail::parse_u64(key, v);
    } else if (key == "order") {
        c.order = detail::parse_u64(key, v);
    } else if (key == "directions") {
        c.directions.clear();
        for (const auto& s : detail::split_list(v)) c.directions.push_back(Dyadic::parse(s));
    } else if (key == "eta") {
        c.eta = Dyadic::parse(v);
        if (!(Dyadic(0) < c.eta) || c.eta.numerator() != 1)
            throw invalid_input("config: eta must be a positive power of two");
    } else if (key == "samples") {
        c.samples = detail::parse_u64(key, v);
    } else if (key == "count") {
        c.count = detail::parse_u64(key, v);
    } else if (key == "seed") {
        c.seed = detail::parse_u64(key, v);
    } else if (key == "strip") {
        const auto p = detail::split_list(v);
        if (p.size() != 2) throw invalid_input("config: strip expects x0,x1");
        c.strip = Strip{Dyadic::parse(p[0]), Dyadic::parse(p[1])};
        if (!(c.strip->x0 < c.strip->x1)) throw invalid_input("config: strip needs x0 < x1");
    } else if (key == "point") {
        const auto p = detail::split_list(v);
        if (p.size() != 2) throw invalid_input("config: point expects x,y");
        c.point = std::make_pair(Dyadic::parse(p[0]), Dyadic::parse(p[1]));
    } else if (key == "grid") {
        c.grid = detail::parse_u64(key, v);
    } else if (key == "out") {
        c.out = v;
    } else if (key == "check") {
        c.check = detail::parse_bool(key, v);
    } else if (key == "cap-enum") {
        c.cap_enum = static_cast<double>(detail::parse_u64(key, v));
    } else if (key == "cap-depth") {
        c.cap_depth = detail::parse_u64(key, v);
    } else if (key == "threads") {
        c.threads = static_cast<unsigned>(detail::parse_u64(key, v));
        if (c.threads == 0) throw invalid_input("config: threads must be positive");
    } else {
        throw invalid_input("config: unknown key '" + key + "'");
    }
}

// Flat key=value text; '#' starts a comment line.
inline void read_config(ExperimentConfig& c, std::istream& is) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw invalid_input("config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(c, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

inline void read_config_file(ExperimentConfig& c, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw invalid_input("cannot open config file " + path);
    read_config(c, is);
}

} // namespace kakeya::lab
