// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/splitting.hpp"

namespace kakeya {

// Separation bound; std::nullopt means unconstrained (no cross-half pair of
// splitting descendants anywhere), which orders above every value.
using Eta = std::optional<Dyadic>;

inline bool eta_less(const Eta& a, const Eta& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}
inline Eta eta_min(const Eta& a, const Eta& b) { return eta_less(b, a) ? b : a; }
inline std::string eta_to_string(const Eta& e) { return e ? e->to_string() : std::string("unconstrained"); }

namespace detail {

struct Hull {
    bool empty = true;
    Dyadic lo; // smallest left endpoint of a splitting interval
    Dyadic hi; // largest right endpoint
    void add(const Dyadic& l, const Dyadic& r) {
        if (empty || l < lo) lo = l;
        if (empty || hi < r) hi = r;
        empty = false;
    }
    void add(const Hull& o) {
        if (!o.empty) add(o.lo, o.hi);
    }
};

inline Dyadic cross_half_ratio(const DirTree& t, int w, const Dyadic& lower_right, const Dyadic& upper_left) {
    Dyadic gap = upper_left - lower_right;
    if (gap.sign() < 0) gap = Dyadic(0);
    return ldexp(gap, static_cast<long long>(t.id(w).height()));
}

} // namespace detail

// Largest eta for which the tree is eta-separated: the minimum over splitting
// vertices w of dist(Q_u, Q_v) / |Q_w| over splitting descendants u, v in
// opposite halves of Q_w. Zero means separated for no positive eta.
inline Eta separation_eta_max(const DirTree& t) {
    std::vector<detail::Hull> hull(t.size());
    Eta best;
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto& n = t.nodes()[i];
        for (int c : n.child)
            if (c != DirTree::npos) hull[i].add(hull[static_cast<std::size_t>(c)]);
        if (!n.splits()) continue;
        const auto& lower = hull[static_cast<std::size_t>(n.child[0])];
        const auto& upper = hull[static_cast<std::size_t>(n.child[1])];
        if (!lower.empty && !upper.empty)
            best = eta_min(best, detail::cross_half_ratio(t, static_cast<int>(i), lower.hi, upper.lo));
        const auto q = vertex_interval(n.id);
        hull[i].add(q.left(), q.right());
    }
    return best;
}

struct SeparatedSubtree {
    Eta eta;
    DirTree subtree;
    bool exact = true; // false if a frontier was thinned to the cap
};

struct SeparationSearchOptions {
    std::size_t frontier_cap = 64;
    std::uint64_t depth_cap = 64;
};

// Maximum of separation_eta_max(S) over subtrees S with lacunary value >= n,
// with a witness S.
//
// Any such S contains an order-n skeleton (a binary hierarchy of splitting
// vertices) using a subset of its splitting vertices, which can only raise the
// separation, so it suffices to optimise over skeletons. The hull of a
// skeleton's splitting intervals is the interval of its top split, so the
// cross-half constraint at w depends only on the two sub-skeleton tops. The
// DP keeps, per (vertex side, order), the Pareto frontier of
// (best eta, top position).
inline SeparatedSubtree best_separated_subtree(const DirTree& t, std::uint64_t n,
                                               const SeparationSearchOptions& opt = {}) {
    if (t.height() > opt.depth_cap)
        throw cap_exceeded("tree depth exceeds search cap", static_cast<double>(t.height()),
                           static_cast<double>(opt.depth_cap));
    const auto rep = splitting_values(t);
    if (rep.lambda < n)
        throw invalid_input("no subtree of order " + std::to_string(n) + ": tree value is " + std::to_string(rep.lambda));

    SeparatedSubtree out;
    if (n == 0) {
        out.subtree = prune(t, 0);
        return out;
    }

    const std::size_t sz = t.size();
    // splitting vertices in each subtree, including the vertex itself
    std::vector<std::vector<int>> splits_below(sz);
    for (std::size_t i = sz; i-- > 0;) {
        const auto& node = t.nodes()[i];
        if (node.splits()) splits_below[i].push_back(static_cast<int>(i));
        for (int c : node.child)
            if (c != DirTree::npos) {
                const auto& sub = splits_below[static_cast<std::size_t>(c)];
                splits_below[i].insert(splits_below[i].end(), sub.begin(), sub.end());
            }
    }

    struct Cell {
        bool feasible = false;
        Eta eta;
        int lower = DirTree::npos;
        int upper = DirTree::npos;
    };
    // table[order][node]
    std::vector<std::vector<Cell>> table(n + 1, std::vector<Cell>(sz));
    std::vector<DyadicInterval> q(sz);
    for (std::size_t i = 0; i < sz; ++i) q[i] = vertex_interval(t.nodes()[i].id);

    for (std::size_t i = 0; i < sz; ++i)
        if (t.nodes()[i].splits()) table[1][i] = Cell{true, std::nullopt};

    struct Cand {
        int v;
        Dyadic key;
        Eta eta;
    };
    auto thin = [&](std::vector<Cand>& f) {
        if (f.size() <= opt.frontier_cap || opt.frontier_cap < 2) return;
        std::vector<Cand> kept;
        const double step = static_cast<double>(f.size() - 1) / static_cast<double>(opt.frontier_cap - 1);
        for (std::size_t k = 0; k < opt.frontier_cap; ++k)
            kept.push_back(f[static_cast<std::size_t>(static_cast<double>(k) * step + 0.5)]);
        f = std::move(kept);
        out.exact = false;
    };

    for (std::uint64_t order = 2; order <= n; ++order) {
        for (std::size_t w = 0; w < sz; ++w) {
            const auto& node = t.nodes()[w];
            if (!node.splits()) continue;
            std::vector<Cand> lower, upper;
            for (int u : splits_below[static_cast<std::size_t>(node.child[0])])
                if (table[order - 1][static_cast<std::size_t>(u)].feasible)
                    lower.push_back({u, q[static_cast<std::size_t>(u)].right(), table[order - 1][static_cast<std::size_t>(u)].eta});
            for (int v : splits_below[static_cast<std::size_t>(node.child[1])])
                if (table[order - 1][static_cast<std::size_t>(v)].feasible)
                    upper.push_back({v, q[static_cast<std::size_t>(v)].left(), table[order - 1][static_cast<std::size_t>(v)].eta});
            if (lower.empty() || upper.empty()) continue;

            // Lower side: small right endpoint is good. Upper: large left endpoint.
            auto frontier = [](std::vector<Cand> c, bool ascending) {
                std::stable_sort(c.begin(), c.end(), [&](const Cand& a, const Cand& b) {
                    return ascending ? a.key < b.key : b.key < a.key;
                });
                std::vector<Cand> f;
                for (auto& x : c)
                    if (f.empty() || eta_less(f.back().eta, x.eta)) f.push_back(std::move(x));
                return f;
            };
            auto fl = frontier(std::move(lower), true);
            auto fu = frontier(std::move(upper), false);
            thin(fl);
            thin(fu);

            Cell cell;
            for (const auto& a : fl)
                for (const auto& b : fu) {
                    Eta e = eta_min(eta_min(a.eta, b.eta), detail::cross_half_ratio(t, static_cast<int>(w), a.key, b.key));
                    if (!cell.feasible || eta_less(cell.eta, e)) cell = Cell{true, e, a.v, b.v};
                }
            table[order][w] = cell;
        }
    }

    int top = DirTree::npos;
    for (std::size_t w = 0; w < sz; ++w) {
        const auto& c = table[n][w];
        if (c.feasible && (top == DirTree::npos || eta_less(table[n][static_cast<std::size_t>(top)].eta, c.eta)))
            top = static_cast<int>(w);
    }
    out.eta = table[n][static_cast<std::size_t>(top)].eta;

    std::vector<BitString> verts;
    std::function<void(int, std::uint64_t)> collect = [&](int w, std::uint64_t order) {
        for (BitString v = t.id(w);; v = v.parent()) {
            verts.push_back(v);
            if (v.is_root()) break;
        }
        if (order >= 2) {
            const auto& c = table[order][static_cast<std::size_t>(w)];
            collect(c.lower, order - 1);
            collect(c.upper, order - 1);
            return;
        }
        for (int ch : t.node(w).child) {
            int cur = ch;
            while (cur != DirTree::npos) {
                verts.push_back(t.id(cur));
                const auto& nd = t.node(cur);
                cur = nd.child[0] != DirTree::npos ? nd.child[0] : nd.child[1];
            }
        }
    };
    collect(top, n);
    out.subtree = DirTree(std::move(verts));
    return out;
}

} // namespace kakeya
