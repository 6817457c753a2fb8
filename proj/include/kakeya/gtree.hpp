// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/membership.hpp"
#include "kakeya/percolation.hpp"

namespace kakeya {

struct GDiagnostic {
    enum class Kind { shared_half, split_tie, cover_count, level_count, orphan };
    Kind kind;
    std::uint64_t level = 0;
    std::string message;
};

inline const char* to_string(GDiagnostic::Kind k) {
    switch (k) {
    case GDiagnostic::Kind::shared_half: return "shared_half";
    case GDiagnostic::Kind::split_tie: return "split_tie";
    case GDiagnostic::Kind::cover_count: return "cover_count";
    case GDiagnostic::Kind::level_count: return "level_count";
    case GDiagnostic::Kind::orphan: return "orphan";
    }
    return "?";
}

// One splitting vertex g of the hierarchy.
struct GSplit {
    int node = DirTree::npos;
    int parent = -1;     // index into splits, -1 at level 0
    int side = 0;        // which child subtree of the parent
    std::uint64_t level = 0;
    Interval intercepts; // I_g
};

// Cover interval G attached to a choice-tree vertex.
struct GCover {
    int split = -1;      // index into GTree::splits
    BitString vertex;    // dyadic interval as a vertex of B
};

struct GTree {
    ChoiceTree tree{"[0,1]"};
    std::vector<GSplit> splits;
    std::vector<GCover> covers;         // indexed by choice-tree vertex, covers[0] unused
    std::uint64_t levels = 0;           // hierarchy levels
    std::vector<std::size_t> level_counts;
    std::vector<std::size_t> level_bounds;  // (4/eta) 2^j
    std::vector<GDiagnostic> diagnostics;
    PossSet poss;

    // Height counted from the level-0 covers, the root [0,1] sitting above.
    std::uint64_t height() const { return levels == 0 ? 0 : levels - 1; }
    bool disjoint() const {
        return std::none_of(diagnostics.begin(), diagnostics.end(),
                            [](const GDiagnostic& d) { return d.kind == GDiagnostic::Kind::shared_half; });
    }
    bool counts_within_bounds() const {
        return std::none_of(diagnostics.begin(), diagnostics.end(), [](const GDiagnostic& d) {
            return d.kind == GDiagnostic::Kind::level_count || d.kind == GDiagnostic::Kind::cover_count;
        });
    }
};

namespace detail {

// Shallowest splitting vertex in the subtree of i, with a flag when two
// share that height.
inline std::pair<int, bool> shallowest_split(const DirTree& t, int i, std::uint64_t below_height) {
    std::vector<int> frontier{i};
    while (!frontier.empty()) {
        std::vector<int> found;
        for (int v : frontier)
            if (t.node(v).splits() && t.id(v).height() < below_height) found.push_back(v);
        if (!found.empty()) return {found.front(), found.size() > 1};
        std::vector<int> next;
        for (int v : frontier)
            for (int c : t.node(v).child)
                if (c != DirTree::npos) next.push_back(c);
        frontier = std::move(next);
    }
    return {DirTree::npos, false};
}

} // namespace detail

// Cover tree for the point (x, y) with 1/(2 eta) < x, over sticky maps
// B^h -> P. Level-0 covers hang from the root [0,1] by certain edges; every
// deeper cover hangs from the cover of the parent split containing it by an
// edge of probability 1/2.
inline GTree build_gtree(const DirTree& p, std::uint64_t h, const Dyadic& eta, const Dyadic& x, const Dyadic& y) {
    if (!(Dyadic(0) < eta) || eta.numerator() != 1) throw invalid_input("eta must be a positive power of two");
    const auto eta_exp = static_cast<long long>(eta.exponent());
    if (!(ldexp(Dyadic(1), eta_exp - 1) < x)) throw invalid_input("gtree needs x > 1/(2 eta)");
    GTree g;
    g.poss = poss_set(p, h, x, y);

    // splitting hierarchy, breadth first
    {
        auto [g0, tie] = detail::shallowest_split(p, p.root(), h);
        if (tie) g.diagnostics.push_back({GDiagnostic::Kind::split_tie, 0, "tie below root"});
        if (g0 != DirTree::npos) g.splits.push_back({g0, -1, 0, 0, {}});
        for (std::size_t i = 0; i < g.splits.size(); ++i) {
            const GSplit cur = g.splits[i];
            for (int side : {0, 1}) {
                const int c = p.child(cur.node, side);
                auto [s, t2] = detail::shallowest_split(p, c, h);
                if (t2)
                    g.diagnostics.push_back({GDiagnostic::Kind::split_tie, cur.level + 1,
                                             "tie below " + p.id(c).str()});
                if (s != DirTree::npos) g.splits.push_back({s, static_cast<int>(i), side, cur.level + 1, {}});
            }
        }
    }
    for (const auto& s : g.splits) g.levels = std::max(g.levels, s.level + 1);
    g.tree.set_height(g.levels);
    g.covers.resize(1);
    g.level_counts.assign(g.levels, 0);
    for (std::uint64_t j = 0; j < g.levels; ++j)
        g.level_bounds.push_back(static_cast<std::size_t>(std::uint64_t{1} << (eta.exponent() + 2 + j)));
    if (g.poss.empty()) return g;

    const auto bases = g.poss.bases();
    const std::size_t max_covers = (std::size_t{1} << (eta.exponent() + 1)) + 1; // 2/eta + 1
    // split index -> (vertex -> choice-tree id)
    std::vector<std::map<BitString, int>> cover_of(g.splits.size());

    for (std::size_t si = 0; si < g.splits.size(); ++si) {
        auto& s = g.splits[si];
        const auto q = vertex_interval(p.id(s.node));
        s.intercepts = Interval{y - x * q.right(), y - x * q.left()};
        const std::uint64_t k = q.length_exponent();
        // dyadic intervals of length 2^-k meeting the interior of I_g
        const BigInt first = s.intercepts.lo.floor_scaled(k);
        BigInt last = s.intercepts.hi.floor_scaled(k);
        if (s.intercepts.hi.scales_to_integer(k)) last -= 1;
        const BigInt count = last - first + 1;
        if (count > BigInt(static_cast<long long>(max_covers)))
            g.diagnostics.push_back({GDiagnostic::Kind::cover_count, s.level,
                                     p.id(s.node).str() + " needs " + count.str() + " covers"});
        std::set<BitString, BreadthFirstOrder> chosen;
        const BigInt cells = BigInt(1) << static_cast<unsigned>(k);
        for (const auto& b : bases) {
            const BitString a = b.ancestor_at(k);
            const BigInt j(a.level_index());
            if (j >= first && j <= last && j >= 0 && j < cells) chosen.insert(a);
        }
        for (const auto& a : chosen) {
            int parent = 0;
            Rational prob(1);
            if (s.parent >= 0) {
                const auto& ps = g.splits[static_cast<std::size_t>(s.parent)];
                const BitString up = a.ancestor_at(vertex_interval(p.id(ps.node)).length_exponent());
                auto it = cover_of[static_cast<std::size_t>(s.parent)].find(up);
                if (it == cover_of[static_cast<std::size_t>(s.parent)].end()) {
                    g.diagnostics.push_back({GDiagnostic::Kind::orphan, s.level,
                                             "cover " + a.str() + " of " + p.id(s.node).str() + " has no parent cover"});
                    continue;
                }
                parent = it->second;
                prob = Rational(1, 2);
            }
            const int id = g.tree.add(parent, prob, a.str());
            cover_of[si].emplace(a, id);
            g.covers.push_back({static_cast<int>(si), a});
            ++g.level_counts[s.level];
        }
    }

    // No half of a cover of g may hold covers of both child splits.
    for (std::size_t si = 0; si < g.splits.size(); ++si) {
        const auto k = vertex_interval(p.id(g.splits[si].node)).length_exponent();
        std::map<BitString, int> sides; // half -> bitmask of sides present
        for (std::size_t ci = 1; ci < g.covers.size(); ++ci) {
            const auto& c = g.covers[ci];
            const auto& cs = g.splits[static_cast<std::size_t>(c.split)];
            if (cs.parent != static_cast<int>(si)) continue;
            sides[c.vertex.ancestor_at(k + 1)] |= 1 << cs.side;
        }
        for (const auto& [half, mask] : sides)
            if (mask == 3)
                g.diagnostics.push_back({GDiagnostic::Kind::shared_half, g.splits[si].level + 1,
                                         "half " + half.str() + " of a cover of " + p.id(g.splits[si].node).str() +
                                             " meets both child splits"});
    }
    for (std::uint64_t j = 0; j < g.levels; ++j)
        if (g.level_counts[j] > g.level_bounds[j])
            g.diagnostics.push_back({GDiagnostic::Kind::level_count, j,
                                     std::to_string(g.level_counts[j]) + " covers exceed " +
                                         std::to_string(g.level_bounds[j])});
    return g;
}

} // namespace kakeya
