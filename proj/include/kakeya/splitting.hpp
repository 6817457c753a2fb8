// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/error.hpp"

namespace kakeya {

// Splitting value of every vertex and the tree value (the lacunary value when
// the tree is T_Omega).
struct SplitReport {
    std::vector<std::uint64_t> by_node; // indexed like DirTree::nodes()
    std::map<BitString, std::uint64_t, BreadthFirstOrder> values;
    std::uint64_t lambda = 0;

    std::uint64_t value(const BitString& v) const {
        auto it = values.find(v);
        if (it == values.end()) throw invalid_input("vertex not in tree: " + v.str());
        return it->second;
    }

    // CSV columns: vertex,height,value
    void write_csv(std::ostream& os) const {
        os << "vertex,height,value\r\n";
        for (const auto& [v, val] : values) os << v.str() << ',' << v.height() << ',' << val << "\r\n";
    }
};

// Strahler-type closed form of the sup-over-subtrees definition:
//   leaf -> 0; one child c -> f(c); two children -> max(f(c1), f(c2), 1 + min(f(c1), f(c2))).
// Since the tree value is the sup over vertices and f is monotone up the
// tree, lambda = f(root).
inline SplitReport splitting_values(const DirTree& t) {
    SplitReport r;
    r.by_node.assign(t.size(), 0);
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto& n = t.nodes()[i];
        if (n.splits()) {
            const auto a = r.by_node[static_cast<std::size_t>(n.child[0])];
            const auto b = r.by_node[static_cast<std::size_t>(n.child[1])];
            r.by_node[i] = std::max({a, b, 1 + std::min(a, b)});
        } else if (!n.is_leaf()) {
            r.by_node[i] = r.by_node[static_cast<std::size_t>(n.child[n.child[0] != DirTree::npos ? 0 : 1])];
        }
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        r.values.emplace(t.nodes()[i].id, r.by_node[i]);
        r.lambda = std::max(r.lambda, r.by_node[i]);
    }
    return r;
}

inline std::uint64_t lacunary_value(const DirTree& t) { return splitting_values(t).lambda; }

// Number of subtrees rooted at vertex i (connected, containing i).
inline double count_rooted_subtrees(const DirTree& t, int i) {
    std::vector<double> c(t.size(), 1.0);
    for (std::size_t k = t.size(); k-- > 0;) {
        double v = 1.0;
        for (int ch : t.nodes()[k].child)
            if (ch != DirTree::npos) v *= 1.0 + c[static_cast<std::size_t>(ch)];
        c[k] = v;
    }
    return c[static_cast<std::size_t>(i)];
}

// Calls visit(in) once per subtree rooted at vertex i, where in[k] != 0 marks
// membership of node k. Throws cap_exceeded before enumerating if the count
// exceeds cap.
inline void for_each_rooted_subtree(const DirTree& t, int i, double cap,
                                    const std::function<void(const std::vector<char>&)>& visit) {
    const double total = count_rooted_subtrees(t, i);
    if (total > cap) throw cap_exceeded("subtree enumeration exceeds cap", total, cap);

    std::vector<char> in(t.size(), 0);
    std::vector<int> frontier{i};
    in[static_cast<std::size_t>(i)] = 1;

    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == frontier.size()) {
            visit(in);
            return;
        }
        const auto kids = t.children(frontier[pos]);
        const unsigned masks = 1U << kids.size();
        for (unsigned m = 0; m < masks; ++m) {
            const std::size_t mark = frontier.size();
            for (std::size_t b = 0; b < kids.size(); ++b)
                if (m & (1U << b)) {
                    frontier.push_back(kids[b]);
                    in[static_cast<std::size_t>(kids[b])] = 1;
                }
            rec(pos + 1);
            while (frontier.size() > mark) {
                in[static_cast<std::size_t>(frontier.back())] = 0;
                frontier.pop_back();
            }
        }
    };
    rec(0);
}

// min over maximal rays of S from i of the number of vertices splitting in S.
inline std::uint64_t min_ray_splits(const DirTree& t, const std::vector<char>& in, int i) {
    const auto& n = t.node(i);
    std::uint64_t best = UINT64_MAX;
    int members = 0;
    for (int c : n.child)
        if (c != DirTree::npos && in[static_cast<std::size_t>(c)]) {
            ++members;
            best = std::min(best, min_ray_splits(t, in, c));
        }
    if (members == 0) return 0;
    return best + (members == 2 ? 1 : 0);
}

// Direct evaluation of the definition: maximise over all subtrees S rooted
// at v the minimum over rays of the split count. Exponential; capped.
inline std::uint64_t brute_force_split(const DirTree& t, const BitString& v, double cap = 65536.0) {
    const int i = t.find(v);
    if (i == DirTree::npos) throw invalid_input("vertex not in tree: " + v.str());
    std::uint64_t best = 0;
    for_each_rooted_subtree(t, i, cap, [&](const std::vector<char>& in) { best = std::max(best, min_ray_splits(t, in, i)); });
    return best;
}

// A pruned subtree of order n: uniform leaf height, 2^n leaves, and every
// root-to-leaf ray carries exactly one splitting vertex of each value 1..n.
//
// Top-down greedy: from the current vertex descend (lower child first) until
// the first vertex whose two children both have value >= n-1, split there
// and recurse with n-1 on each side. Order-0 parts follow the tree down to a
// leaf; afterwards all leaves are padded with lower children up to the
// deepest leaf height, which may leave the input tree.
inline DirTree prune(const DirTree& t, std::uint64_t n) {
    const SplitReport rep = splitting_values(t);
    if (rep.lambda < n)
        throw invalid_input("cannot prune to order " + std::to_string(n) + ": tree value is " +
                            std::to_string(rep.lambda));
    // The root value is the tree value, so the root is always a valid start.
    auto f = [&](int i) { return rep.by_node[static_cast<std::size_t>(i)]; };

    std::vector<BitString> kept;
    std::vector<BitString> ends;
    std::function<void(int, std::uint64_t)> select = [&](int v, std::uint64_t order) {
        int c = v;
        while (true) {
            kept.push_back(t.id(c));
            const auto& node = t.node(c);
            if (order == 0) {
                if (node.is_leaf()) {
                    ends.push_back(t.id(c));
                    return;
                }
                c = node.child[0] != DirTree::npos ? node.child[0] : node.child[1];
                continue;
            }
            if (node.splits() && std::min(f(node.child[0]), f(node.child[1])) + 1 >= order) {
                select(node.child[0], order - 1);
                select(node.child[1], order - 1);
                return;
            }
            // f(c) >= order forces a child with value >= order here.
            c = (node.child[0] != DirTree::npos && f(node.child[0]) >= order) ? node.child[0] : node.child[1];
        }
    };
    select(t.root(), n);

    std::uint64_t h = 0;
    for (const auto& e : ends) h = std::max(h, e.height());
    for (auto e : ends)
        while (e.height() < h) {
            e = e.child(0);
            kept.push_back(e);
        }
    return DirTree(std::move(kept));
}

} // namespace kakeya
