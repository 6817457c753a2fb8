// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <vector>

#include "kakeya/dyadic.hpp"
#include "kakeya/rational.hpp"

namespace kakeya::detail {

// Endpoint c + m t of an open interval moving linearly in t.
// delta is +1 for a lower end, -1 for an upper end; mask endpoints bound a
// band that the covered set is intersected with.
template <class Int>
struct SweepEndpoint {
    Int c;
    Int m;
    int delta;
    bool mask;
};

inline BigInt to_big(const BigInt& v) { return v; }
inline BigInt to_big(long long v) { return BigInt(v); }
inline BigInt to_big(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt r = BigInt(static_cast<std::uint64_t>(u >> 64));
    r <<= 64;
    r += BigInt(static_cast<std::uint64_t>(u));
    return neg ? BigInt(-r) : r;
}

// Exact integral over t in [0, 1] of the length of
//   {y : y inside some non-mask interval, and inside the mask band if any}.
//
// Kinetic sweep: endpoints are kept sorted by position; adjacent pairs
// carry the time at which they swap. Between swaps the covered length is
// A + B t, and a swap at t = p/q changes (A, B) by (dA, dB), which adds
// dA (1 - t) + dB (1 - t^2) / 2 to the integral. Those terms are
// accumulated exactly per denominator q.
template <class Int, class Wide>
Rational kinetic_integral(const std::vector<SweepEndpoint<Int>>& e, bool use_mask) {
    const std::size_t n = e.size();
    if (n == 0) return Rational(0);

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (e[a].c != e[b].c) return e[a].c < e[b].c;
        return e[a].m < e[b].m;
    });
    std::vector<std::uint32_t> where(n);
    for (std::size_t i = 0; i < n; ++i) where[order[i]] = static_cast<std::uint32_t>(i);

    // coverage state before each position
    std::vector<int> kc(n + 1, 0), mc(n + 1, 0);
    std::vector<signed char> coef(n, 0);
    auto inside = [&](int k, int m) { return k > 0 && (!use_mask || m > 0); };
    auto coefficient = [&](int k, int m, const SweepEndpoint<Int>& ep) -> signed char {
        const bool before = inside(k, m);
        const int k2 = ep.mask ? k : k + ep.delta;
        const int m2 = ep.mask ? m + ep.delta : m;
        const bool after = inside(k2, m2);
        if (!before && after) return -1;
        if (before && !after) return 1;
        return 0;
    };

    Wide A = 0;
    Wide B = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ep = e[order[i]];
        coef[i] = coefficient(kc[i], mc[i], ep);
        kc[i + 1] = kc[i] + (ep.mask ? 0 : ep.delta);
        mc[i + 1] = mc[i] + (ep.mask ? ep.delta : 0);
        if (coef[i] > 0) {
            A += Wide(ep.c);
            B += Wide(ep.m);
        } else if (coef[i] < 0) {
            A -= Wide(ep.c);
            B -= Wide(ep.m);
        }
    }
    const Wide A0 = A;
    const Wide B0 = B;

    struct Event {
        Int num;
        Int den; // > 0
        std::uint32_t p;
        std::uint32_t q;
    };
    auto later = [](const Event& a, const Event& b) { return Wide(a.num) * Wide(b.den) > Wide(b.num) * Wide(a.den); };
    std::priority_queue<Event, std::vector<Event>, decltype(later)> heap(later);

    auto schedule = [&](std::size_t pos) {
        if (pos + 1 >= n) return;
        const std::uint32_t p = order[pos];
        const std::uint32_t q = order[pos + 1];
        if (!(e[q].m < e[p].m)) return;
        Int num = e[q].c - e[p].c;
        Int den = e[p].m - e[q].m;
        if (num < den) heap.push(Event{std::move(num), std::move(den), p, q});
    };
    for (std::size_t i = 0; i + 1 < n; ++i) schedule(i);

    std::map<Int, Wide> acc; // denominator q -> sum of numerators over 2 q^2
    auto contribution = [](signed char c, const SweepEndpoint<Int>& ep, Wide& a, Wide& b) {
        if (c > 0) {
            a += Wide(ep.c);
            b += Wide(ep.m);
        } else if (c < 0) {
            a -= Wide(ep.c);
            b -= Wide(ep.m);
        }
    };

    while (!heap.empty()) {
        const Event ev = heap.top();
        heap.pop();
        const std::uint32_t pos = where[ev.p];
        if (pos + 1 >= n || order[pos + 1] != ev.q) continue;

        Wide oldA = 0, oldB = 0, newA = 0, newB = 0;
        contribution(coef[pos], e[ev.p], oldA, oldB);
        contribution(coef[pos + 1], e[ev.q], oldA, oldB);

        order[pos] = ev.q;
        order[pos + 1] = ev.p;
        where[ev.q] = pos;
        where[ev.p] = pos + 1;
        const auto& eq = e[ev.q];
        coef[pos] = coefficient(kc[pos], mc[pos], eq);
        kc[pos + 1] = kc[pos] + (eq.mask ? 0 : eq.delta);
        mc[pos + 1] = mc[pos] + (eq.mask ? eq.delta : 0);
        coef[pos + 1] = coefficient(kc[pos + 1], mc[pos + 1], e[ev.p]);
        contribution(coef[pos], eq, newA, newB);
        contribution(coef[pos + 1], e[ev.p], newA, newB);

        const Wide dA = newA - oldA;
        const Wide dB = newB - oldB;
        if (dA != 0 || dB != 0) {
            const Wide p = Wide(ev.num);
            const Wide q = Wide(ev.den);
            acc[ev.den] += Wide(2) * dA * (q - p) * q + dB * (q * q - p * p);
        }
        if (pos > 0) schedule(pos - 1);
        schedule(pos + 1);
    }

    Rational total(to_big(Wide(2) * A0 + B0), BigInt(2));
    for (const auto& [q, num] : acc) {
        if (num == 0) continue;
        const BigInt bq = to_big(q);
        total = total + Rational(to_big(num), BigInt(2) * bq * bq);
    }
    return total;
}

} // namespace kakeya::detail
