// SPDX-License-Identifier: Apache-2.0
// Independent reference implementations used as test oracles.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/splitting.hpp"

namespace kakeya::testing {

// Random parent-closed tree: every vertex below max_depth splits with
// probability p_split, otherwise keeps one random child with probability
// p_continue and stops otherwise. Redrawn until the number of subtrees at
// the root is at most max_subtrees.
inline DirTree random_tree(std::mt19937_64& gen, std::uint64_t max_depth, double p_split, double p_continue,
                           double max_subtrees = 65536.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (true) {
        std::vector<BitString> v{BitString::root()};
        for (std::size_t i = 0; i < v.size(); ++i) {
            const BitString cur = v[i];
            if (cur.height() >= max_depth) continue;
            const double r = u(gen);
            if (r < p_split) {
                v.push_back(cur.child(0));
                v.push_back(cur.child(1));
            } else if (r < p_split + p_continue) {
                v.push_back(cur.child(u(gen) < 0.5 ? 0 : 1));
            }
        }
        DirTree t(std::move(v));
        if (count_rooted_subtrees(t, t.root()) <= max_subtrees) return t;
    }
}

// The definition read literally: for every splitting w and every pair of
// splitting proper descendants in different child subtrees,
// distance(Q_u, Q_v) / |Q_w|. nullopt if no such pair exists.
inline std::optional<Dyadic> separation_by_pairs(const DirTree& t) {
    std::optional<Dyadic> best;
    std::vector<int> splits;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.nodes()[i].splits()) splits.push_back(static_cast<int>(i));
    for (int w : splits) {
        const BitString lo = t.id(w).child(0), hi = t.id(w).child(1);
        for (int a : splits) {
            if (!lo.is_ancestor_or_self_of(t.id(a))) continue;
            for (int b : splits) {
                if (!hi.is_ancestor_or_self_of(t.id(b))) continue;
                const Dyadic dist = interval_distance(vertex_interval(t.id(a)).closed(), vertex_interval(t.id(b)).closed());
                const Dyadic ratio = ldexp(dist, static_cast<long long>(t.id(w).height()));
                if (!best || ratio < *best) best = ratio;
            }
        }
    }
    return best;
}

// Subtree of t made of the marked nodes.
inline DirTree subtree_of(const DirTree& t, const std::vector<char>& in) {
    std::vector<BitString> v;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (in[i]) v.push_back(t.nodes()[i].id);
    return DirTree(std::move(v));
}

// Max over all subtrees containing the root with lacunary value >= n of the
// pairwise separation. Returns {feasible, eta}.
inline std::pair<bool, std::optional<Dyadic>> best_separation_exhaustive(const DirTree& t, std::uint64_t n,
                                                                         double cap = 1e6) {
    bool found = false;
    std::optional<Dyadic> best;
    for_each_rooted_subtree(t, t.root(), cap, [&](const std::vector<char>& in) {
        const DirTree s = subtree_of(t, in);
        if (lacunary_value(s) < n) return;
        const auto e = separation_by_pairs(s);
        if (!found) {
            found = true;
            best = e;
            return;
        }
        if (!best) return;
        if (!e || *best < *e) best = e;
    });
    return {found, best};
}

// Splitting vertices on each root-to-leaf ray with their values in t.
inline std::vector<std::vector<std::uint64_t>> ray_split_values(const DirTree& t) {
    const auto rep = splitting_values(t);
    std::vector<std::vector<std::uint64_t>> out;
    std::function<void(int, std::vector<std::uint64_t>)> walk = [&](int i, std::vector<std::uint64_t> acc) {
        const auto& n = t.node(i);
        if (n.splits()) acc.push_back(rep.by_node[static_cast<std::size_t>(i)]);
        if (n.is_leaf()) {
            out.push_back(acc);
            return;
        }
        for (int c : n.child)
            if (c != DirTree::npos) walk(c, acc);
    };
    walk(t.root(), {});
    return out;
}

} // namespace kakeya::testing
