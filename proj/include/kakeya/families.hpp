// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/interval.hpp"

namespace kakeya {

enum class FamilyKind { quarter_cantor, theorem2, section5 };

inline std::string to_string(FamilyKind k) {
    switch (k) {
    case FamilyKind::quarter_cantor: return "quarter_cantor";
    case FamilyKind::theorem2: return "theorem2";
    case FamilyKind::section5: return "section5";
    }
    return "?";
}

inline FamilyKind parse_family_kind(std::string_view s) {
    if (s == "quarter_cantor" || s == "quarter-cantor") return FamilyKind::quarter_cantor;
    if (s == "theorem2") return FamilyKind::theorem2;
    if (s == "section5") return FamilyKind::section5;
    throw invalid_input("unknown family '" + std::string(s) + "'");
}

struct Family {
    FamilyKind kind{};
    std::uint64_t n = 0;
    // Generation-n intervals, indexed by the choice sequence read as a
    // binary number with the first choice most significant (lower = 0).
    std::vector<Interval> intervals;
    std::vector<Dyadic> directions;
    std::uint64_t depth = 0;

    std::string name() const { return to_string(kind) + "(" + std::to_string(n) + ")"; }
    DirTree tree() const { return build_tree(directions, depth); }
};

namespace detail {

// Map for generation g (1-based), side 0 = lower, 1 = upper.
inline Interval family_step(FamilyKind kind, std::uint64_t g, int side, const Interval& in) {
    switch (kind) {
    case FamilyKind::quarter_cantor: {
        const Dyadic q = ldexp(in.length(), -2);
        return side == 0 ? Interval{in.lo, in.lo + q} : Interval{in.hi - q, in.hi};
    }
    case FamilyKind::theorem2:
        return (side == 0 ? IntervalMap::rho1() : IntervalMap::rho2())(in);
    case FamilyKind::section5:
        return IntervalMap::rho(g, side + 1)(in);
    }
    return in;
}

} // namespace detail

// All 2^g intervals of generation g, in choice order.
inline std::vector<Interval> family_generation(FamilyKind kind, std::uint64_t g) {
    std::vector<Interval> cur{Interval{Dyadic(0), Dyadic(1)}};
    for (std::uint64_t k = 1; k <= g; ++k) {
        std::vector<Interval> next;
        next.reserve(cur.size() * 2);
        for (const auto& I : cur) {
            next.push_back(detail::family_step(kind, k, 0, I));
            next.push_back(detail::family_step(kind, k, 1, I));
        }
        cur = std::move(next);
    }
    return cur;
}

// Directions are the left endpoints of the generation-n intervals shifted by
// a small dyadic offset, so that no direction sits on a dyadic boundary of
// level <= depth.
//   quarter_cantor(n): offset 2^-8n, depth 2n
//   theorem2(n):       offset 2^-100n, depth 3n
//   section5(n):       offset 2^-(n^2+3n), depth n(n+1)/2; generation g
//                      applies rho_{g,i}, so rho_{1,i} acts first
inline Family generate_family(FamilyKind kind, std::uint64_t n, std::optional<std::uint64_t> depth = std::nullopt) {
    if (n < 1) throw invalid_input("family parameter must be at least 1");
    if (n > 24) throw invalid_input("family parameter too large (max 24)");
    Family f;
    f.kind = kind;
    f.n = n;
    f.intervals = family_generation(kind, n);
    long long offset_exp = 0;
    switch (kind) {
    case FamilyKind::quarter_cantor:
        offset_exp = 8 * static_cast<long long>(n);
        f.depth = 2 * n;
        break;
    case FamilyKind::theorem2:
        offset_exp = 100 * static_cast<long long>(n);
        f.depth = 3 * n;
        break;
    case FamilyKind::section5:
        offset_exp = static_cast<long long>(n * n + 3 * n);
        f.depth = n * (n + 1) / 2;
        break;
    }
    if (depth) f.depth = *depth;
    const Dyadic offset = Dyadic::pow2(-offset_exp);
    f.directions.reserve(f.intervals.size());
    for (const auto& I : f.intervals) f.directions.push_back(I.lo + offset);
    return f;
}

} // namespace kakeya
