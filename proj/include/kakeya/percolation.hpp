// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kakeya/error.hpp"
#include "kakeya/rational.hpp"

namespace kakeya {

// Rooted tree with an ordered child list and an open-probability on the
// edge into every non-root vertex. Survival means an open path from the
// root to a vertex at depth height().
class ChoiceTree {
public:
    struct Vertex {
        int parent = -1;
        std::vector<int> children;
        Rational p{1};     // edge from the parent
        std::uint64_t depth = 0;
        std::string label;
    };

    explicit ChoiceTree(std::string root_label = "root") { v_.push_back({-1, {}, Rational(1), 0, std::move(root_label)}); }

    int add(int parent, Rational p, std::string label = {}) {
        if (parent < 0 || static_cast<std::size_t>(parent) >= v_.size()) throw invalid_input("choice tree: bad parent");
        if (p < Rational(0) || Rational(1) < p) throw invalid_input("edge probability outside [0,1]");
        const int id = static_cast<int>(v_.size());
        const auto d = v_[static_cast<std::size_t>(parent)].depth + 1;
        v_.push_back({parent, {}, std::move(p), d, std::move(label)});
        v_[static_cast<std::size_t>(parent)].children.push_back(id);
        if (!fixed_height_ && d > height_) height_ = d;
        return id;
    }

    // Fixes the survival depth; vertices may then sit at most this deep.
    void set_height(std::uint64_t h) {
        for (const auto& v : v_)
            if (v.depth > h) throw invalid_input("choice tree already deeper than requested height");
        height_ = h;
        fixed_height_ = true;
    }

    std::uint64_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return v_.size(); }
    const Vertex& vertex(int i) const { return v_.at(static_cast<std::size_t>(i)); }
    const std::vector<Vertex>& vertices() const noexcept { return v_; }

    std::size_t max_branching() const {
        std::size_t b = 0;
        for (const auto& v : v_) b = std::max(b, v.children.size());
        return b;
    }
    std::vector<std::size_t> level_counts() const {
        std::vector<std::size_t> c(height_ + 1, 0);
        for (const auto& v : v_) ++c[v.depth];
        return c;
    }

    static ChoiceTree full(std::uint64_t h, unsigned arity = 2, const Rational& p = Rational(1, 2)) {
        ChoiceTree t;
        std::vector<int> level{0};
        for (std::uint64_t d = 0; d < h; ++d) {
            std::vector<int> next;
            for (int v : level)
                for (unsigned k = 0; k < arity; ++k) next.push_back(t.add(v, p));
            level = std::move(next);
        }
        t.set_height(h);
        return t;
    }

    // One vertex per line, indented two spaces per level: "label p".
    void write(std::ostream& os) const { write_rec(os, 0); }
    std::string to_text() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    void write_rec(std::ostream& os, int i) const {
        const auto& v = v_[static_cast<std::size_t>(i)];
        os << std::string(2 * v.depth, ' ') << (v.label.empty() ? std::to_string(i) : v.label);
        if (v.parent >= 0) os << " p=" << v.p.to_string();
        os << '\n';
        for (int c : v.children) write_rec(os, c);
    }

    std::vector<Vertex> v_;
    std::uint64_t height_ = 0;
    bool fixed_height_ = false;
};

namespace detail {

template <class EdgeP>
Rational survival(const ChoiceTree& t, EdgeP edge_p) {
    std::vector<Rational> s(t.size(), Rational(0));
    for (std::size_t i = t.size(); i-- > 0;) {
        const auto& v = t.vertices()[i];
        if (v.depth == t.height()) {
            s[i] = Rational(1);
            continue;
        }
        Rational miss(1);
        for (int c : v.children) miss *= Rational(1) - edge_p(t.vertex(c)) * s[static_cast<std::size_t>(c)];
        s[i] = Rational(1) - miss;
    }
    return s[0];
}

} // namespace detail

// Exact survival with the stored edge probabilities.
inline Rational survival_probability(const ChoiceTree& t) {
    return detail::survival(t, [](const ChoiceTree::Vertex& v) -> const Rational& { return v.p; });
}

// Exact survival with every edge open with probability p.
inline Rational survival_probability(const ChoiceTree& t, const Rational& p) {
    if (p < Rational(0) || Rational(1) < p) throw invalid_input("p must lie in [0,1]");
    return detail::survival(t, [&](const ChoiceTree::Vertex&) -> const Rational& { return p; });
}

// Enclosure [lo, hi] of a real number.
struct Bounds {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
};

namespace detail {

inline double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

} // namespace detail

// s(n) for the full binary tree of height n: s(0) = 1,
// s(n) = 1 - (1 - p s(n-1))^2. Exact up to exact_limit (denominators grow
// like 2^(2^n)); every row carries outward-rounded double bounds.
struct PercolationRow {
    std::uint64_t n = 0;
    std::optional<Rational> exact;
    Bounds s;
};

inline std::vector<PercolationRow> full_binary_survival(std::uint64_t n_max, const Rational& p,
                                                        std::uint64_t exact_limit = 12) {
    if (p < Rational(0) || Rational(1) < p) throw invalid_input("p must lie in [0,1]");
    const double pd = p.to_double();
    const Bounds pb{p.is_dyadic() ? pd : detail::down(pd), p.is_dyadic() ? pd : detail::up(pd)};
    std::vector<PercolationRow> out;
    Rational ex(1);
    Bounds s{1.0, 1.0};
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        if (n > 0) {
            // s' is increasing in p and in s
            const double a_hi = detail::up(1.0 - detail::down(pb.lo * s.lo));
            const double a_lo = detail::down(1.0 - detail::up(pb.hi * s.hi));
            const Bounds next{std::max(0.0, detail::down(1.0 - detail::up(a_hi * a_hi))),
                              std::min(1.0, detail::up(1.0 - detail::down(a_lo * a_lo)))};
            s = next;
            if (n <= exact_limit) {
                const Rational a = Rational(1) - p * ex;
                ex = Rational(1) - a * a;
            }
        }
        PercolationRow row;
        row.n = n;
        row.s = s;
        if (n <= exact_limit) row.exact = ex;
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace kakeya
