// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "kakeya/bitstring.hpp"
#include "kakeya/dirtree.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/rational.hpp"
#include "kakeya/seed.hpp"
#include "kakeya/sticky.hpp"

namespace kakeya {

// A base vertex b of B^h and a height-h vertex s of the target tree such
// that the parallelogram over Q_b with slope left(Q_s) contains the point.
struct PossPair {
    BitString base;
    int slope_node = DirTree::npos;
    Dyadic slope;
};

struct PossSet {
    std::uint64_t h = 0;
    std::vector<PossPair> pairs; // by slope, then base

    bool empty() const noexcept { return pairs.empty(); }
    std::vector<BitString> bases() const {
        std::vector<BitString> out;
        for (const auto& p : pairs) out.push_back(p.base);
        std::sort(out.begin(), out.end(), BreadthFirstOrder{});
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

namespace detail {

inline void require_height(const DirTree& t, std::uint64_t h) {
    if (h > StickyMap::max_height) throw invalid_input("map height too large");
    for (int leaf : t.leaves())
        if (t.id(leaf).height() < h)
            throw invalid_input("target tree has a leaf above height " + std::to_string(h) + ": " + t.id(leaf).str());
}

} // namespace detail

inline PossSet poss_set(const DirTree& t, std::uint64_t h, const Dyadic& x, const Dyadic& y) {
    detail::require_height(t, h);
    PossSet out;
    out.h = h;
    const BigInt cells = BigInt(1) << static_cast<unsigned>(h);
    for (int s : t.at_height(h)) {
        const Dyadic d = vertex_interval(t.id(s)).left();
        const Dyadic b = y - d * x;
        if (b.scales_to_integer(h)) continue; // on a base boundary line
        const BigInt j = b.floor_scaled(h);
        if (j < 0 || j >= cells) continue;
        out.pairs.push_back({BitString::from_level_index(h, j.convert_to<std::uint64_t>()), s, d});
    }
    return out;
}

// Pr over uniformly random sticky maps B^h -> T that (x, y) lies in K_sigma.
//
// H(u, t) = Pr(some pair below u is hit | sigma(u) = t). Children of u choose
// their images independently, so
//   H(u, t) = 1 - prod_c (1 - sum_{t' child of t} w(t) H(c, t'))
// with w = 1/2 where t splits and 1 otherwise. Only vertices spanned by
// the poss bases enter.
inline Rational membership_probability_exact(const DirTree& t, std::uint64_t h, const Dyadic& x, const Dyadic& y) {
    const PossSet poss = poss_set(t, h, x, y);
    if (poss.empty()) return Rational(0);
    std::vector<BitString> bases = poss.bases();
    const auto f = detail::spanned_forest(h, bases);

    std::unordered_map<std::uint64_t, std::vector<int>> targets; // base heap -> slope nodes
    for (const auto& p : poss.pairs) targets[p.base.heap_index()].push_back(p.slope_node);
    // slope vertices reachable below each forest position
    std::vector<std::vector<int>> below(f.vertices.size());
    for (std::size_t i = f.vertices.size(); i-- > 0;) {
        auto it = targets.find(f.vertices[i]);
        if (it != targets.end()) below[i] = it->second;
        for (int k : f.kids[i])
            if (k >= 0) below[i].insert(below[i].end(), below[static_cast<std::size_t>(k)].begin(),
                                        below[static_cast<std::size_t>(k)].end());
    }
    auto reaches = [&](std::size_t pos, int node) {
        for (int s : below[pos])
            if (t.id(node).is_ancestor_or_self_of(t.id(s))) return true;
        return false;
    };

    std::unordered_map<std::uint64_t, Dyadic> memo;
    std::function<Dyadic(std::size_t, int)> H = [&](std::size_t pos, int node) -> Dyadic {
        if (!reaches(pos, node)) return Dyadic(0);
        const std::uint64_t key = (static_cast<std::uint64_t>(pos) << 32) | static_cast<std::uint32_t>(node);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Dyadic r(0);
        if (BitString::from_heap_index(f.vertices[pos]).height() == h) {
            r = Dyadic(1); // reaches() already matched node against this base
        } else {
            const auto& n = t.node(node);
            const long long w = n.splits() ? -1 : 0;
            Dyadic miss(1);
            for (int k : f.kids[pos]) {
                if (k < 0) continue;
                Dyadic hit(0);
                for (int c : n.child)
                    if (c != DirTree::npos) hit += ldexp(H(static_cast<std::size_t>(k), c), w);
                miss = miss * (Dyadic(1) - hit);
            }
            r = Dyadic(1) - miss;
        }
        memo.emplace(key, r);
        return r;
    };
    return Rational(H(0, t.root()));
}

struct MembershipEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
};

// Sample i draws its map with seed derive_seed(seed, i), so any partition of
// the index range gives the same hits.
inline std::uint64_t membership_hits(const std::shared_ptr<const DirTree>& t, std::uint64_t h, const PossSet& poss,
                                     std::uint64_t seed, std::uint64_t first, std::uint64_t last) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = first; i < last; ++i) {
        const StickyMap m = sample(t, h, derive_seed(seed, i));
        for (const auto& p : poss.pairs)
            if (m.image_index(p.base) == p.slope_node) {
                ++hits;
                break;
            }
    }
    return hits;
}

inline MembershipEstimate membership_probability_mc(const std::shared_ptr<const DirTree>& t, std::uint64_t h,
                                                    const Dyadic& x, const Dyadic& y, std::uint64_t samples,
                                                    std::uint64_t seed) {
    if (!t) throw invalid_input("membership: no target tree");
    if (samples < 1) throw invalid_input("need at least one sample");
    const PossSet poss = poss_set(*t, h, x, y);
    MembershipEstimate r;
    r.samples = samples;
    if (!poss.empty()) r.hits = membership_hits(t, h, poss, seed, 0, samples);
    const double p = static_cast<double>(r.hits) / static_cast<double>(samples);
    r.estimate = p;
    r.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return r;
}

} // namespace kakeya
