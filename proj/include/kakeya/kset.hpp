// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "kakeya/dyadic.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/sticky.hpp"

namespace kakeya {

// Open region {(x, y) : left + slope x < y < left + 2^-k + slope x}.
struct Parallelogram {
    DyadicInterval base;
    Dyadic slope;

    Dyadic lower_at(const Dyadic& x) const { return base.left() + slope * x; }
    Dyadic upper_at(const Dyadic& x) const { return base.right() + slope * x; }
    bool contains(const Dyadic& x, const Dyadic& y) const { return lower_at(x) < y && y < upper_at(x); }

    friend bool operator==(const Parallelogram&, const Parallelogram&) = default;
};

class KSet {
public:
    KSet() = default;
    explicit KSet(std::vector<Parallelogram> ps) : ps_(std::move(ps)) { index(); }

    const std::vector<Parallelogram>& parallelograms() const noexcept { return ps_; }
    std::size_t size() const noexcept { return ps_.size(); }
    bool empty() const noexcept { return ps_.empty(); }

    // Open-interior membership; boundary points are outside.
    bool contains(const Dyadic& x, const Dyadic& y) const {
        for (const auto& g : groups_) {
            const Dyadic b = y - g.slope * x; // intercept of the line through (x, y)
            // last base whose left end is below b
            auto it = std::lower_bound(g.members.begin(), g.members.end(), b,
                                       [&](std::size_t i, const Dyadic& v) { return ps_[i].base.left() < v; });
            const Dyadic widest = Dyadic::pow2(-static_cast<long long>(g.min_exp));
            while (it != g.members.begin()) {
                --it;
                const auto& p = ps_[*it];
                if (b < p.base.right()) return true;
                if (!(b < p.base.left() + widest)) break;
            }
        }
        return false;
    }

    // Index of a parallelogram containing (x, y), or -1.
    int locate(const Dyadic& x, const Dyadic& y) const {
        for (std::size_t i = 0; i < ps_.size(); ++i)
            if (ps_[i].contains(x, y)) return static_cast<int>(i);
        return -1;
    }

private:
    struct Group {
        Dyadic slope;
        std::vector<std::size_t> members; // sorted by base left end
        std::uint64_t min_exp = 0;        // widest member
    };

    void index() {
        std::map<Dyadic, std::vector<std::size_t>> by_slope;
        for (std::size_t i = 0; i < ps_.size(); ++i) by_slope[ps_[i].slope].push_back(i);
        for (auto& [s, members] : by_slope) {
            std::sort(members.begin(), members.end(),
                      [&](std::size_t a, std::size_t b) { return ps_[a].base.left() < ps_[b].base.left(); });
            std::uint64_t e = UINT64_MAX;
            for (auto i : members) e = std::min(e, ps_[i].base.length_exponent());
            groups_.push_back({s, std::move(members), e});
        }
    }

    std::vector<Parallelogram> ps_;
    std::vector<Group> groups_;
};

// One parallelogram per leaf u of B^h: base Q_u, slope the left end of
// Q_sigma(u).
inline KSet build_kset(const StickyMap& sigma) {
    std::vector<Parallelogram> ps;
    ps.reserve(sigma.leaf_count());
    for (std::uint64_t j = 0; j < sigma.leaf_count(); ++j) {
        const BitString u = sigma.leaf(j);
        const auto& img = sigma.tree().id(sigma.leaf_image_index(j));
        ps.push_back({vertex_interval(u), vertex_interval(img).left()});
    }
    return KSet(std::move(ps));
}

} // namespace kakeya
