// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "kakeya/families.hpp"
#include "kakeya/kset.hpp"
#include "kakeya/membership.hpp"
#include "kakeya/sticky.hpp"

namespace kakeya {

// y = 1 + 8^-1 + ... + 8^-n - 8^-(n+1)
inline Dyadic theorem2_y(std::uint64_t n) {
    Dyadic y(1);
    for (std::uint64_t k = 1; k <= n; ++k) y += Dyadic::pow2(-3 * static_cast<long long>(k));
    return y - Dyadic::pow2(-3 * static_cast<long long>(n + 1));
}

// Which poss pairs one map (or restricted assignment) hits.
struct TournamentEntry {
    std::uint64_t index = 0;
    Dyadic weight;
    std::vector<std::size_t> winners; // indices into poss.pairs
};

struct Theorem2Report {
    std::uint64_t n = 0;
    std::uint64_t h = 0;
    Dyadic x{1};
    Dyadic y;
    PossSet poss;
    Rational exact;                       // membership_probability_exact
    std::optional<std::uint64_t> maps;    // all sticky maps, when within the cap
    std::uint64_t maps_hit = 0;           // of those, K_sigma contains the point
    std::vector<TournamentEntry> tournament;
    Dyadic restricted_probability;        // weight of hitting restricted assignments
    std::uint64_t mc_samples = 0;
    std::uint64_t mc_hits = 0;

    bool all_hit() const {
        return exact == Rational(1) && restricted_probability == Dyadic(1) && mc_hits == mc_samples &&
               (!maps || maps_hit == *maps);
    }
};

struct Theorem2Options {
    std::uint64_t mc_samples = 10000;
    std::uint64_t seed = 1;
    double cap = 1048576.0;    // restricted assignments
    double full_cap = 4096.0;  // complete sticky maps
};

// Runs every check of the counterexample on theorem2(n) at (1, theorem2_y(n)).
// Full enumeration of sticky maps happens only when their number is at most
// full_cap; the restricted enumeration always runs (and may throw
// cap_exceeded).
inline Theorem2Report verify_theorem2(std::uint64_t n, const Theorem2Options& opt = {}) {
    const Family fam = generate_family(FamilyKind::theorem2, n);
    auto tree = std::make_shared<const DirTree>(fam.tree());
    Theorem2Report r;
    r.n = n;
    r.h = fam.depth;
    r.y = theorem2_y(n);
    r.poss = poss_set(*tree, r.h, r.x, r.y);
    r.exact = membership_probability_exact(*tree, r.h, r.x, r.y);

    if (count_sticky(*tree, r.h) <= BigInt(static_cast<long long>(opt.full_cap))) {
        std::uint64_t count = 0;
        for_each_sticky(tree, r.h, [&](const StickyMap& m) {
            if (build_kset(m).contains(r.x, r.y)) ++r.maps_hit;
            ++count;
        }, opt.full_cap);
        r.maps = count;
    }

    r.restricted_probability = Dyadic(0);
    std::uint64_t idx = 0;
    enumerate_restricted(*tree, r.h, r.poss.bases(), [&](const RestrictedAssignment& a, const Dyadic& w) {
        TournamentEntry e{idx++, w, {}};
        for (std::size_t i = 0; i < r.poss.pairs.size(); ++i)
            if (a.image_of(r.poss.pairs[i].base.heap_index()) == r.poss.pairs[i].slope_node) e.winners.push_back(i);
        if (!e.winners.empty()) r.restricted_probability += w;
        r.tournament.push_back(std::move(e));
    }, opt.cap);

    r.mc_samples = opt.mc_samples;
    for (std::uint64_t i = 0; i < opt.mc_samples; ++i)
        if (build_kset(sample(tree, r.h, derive_seed(opt.seed, i))).contains(r.x, r.y)) ++r.mc_hits;
    return r;
}

} // namespace kakeya
