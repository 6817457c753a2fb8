// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kakeya/dyadic.hpp"
#include "kakeya/error.hpp"
#include "kakeya/kset.hpp"
#include "kakeya/rational.hpp"
#include "kakeya/sweep.hpp"

namespace kakeya {

// Lines c + slope x and c + width + slope x bounding an open band.
struct Band {
    Dyadic lower; // intercept at x = 0
    Dyadic width;
    Dyadic slope;
};

namespace detail {

struct RawEndpoint {
    Dyadic c;
    Dyadic m;
    int delta;
    bool mask;
};

// Endpoints in the strip parameter t, x = x0 + (x1 - x0) t.
inline std::vector<RawEndpoint> strip_endpoints(const KSet& k, const Dyadic& x0, const Dyadic& x1,
                                                const std::optional<Band>& mask) {
    const Dyadic dx = x1 - x0;
    std::vector<RawEndpoint> out;
    out.reserve(2 * k.size() + 2);
    for (const auto& p : k.parallelograms()) {
        const Dyadic c = p.base.left() + p.slope * x0;
        const Dyadic m = p.slope * dx;
        out.push_back({c, m, +1, false});
        out.push_back({c + p.base.length(), m, -1, false});
    }
    if (mask) {
        const Dyadic c = mask->lower + mask->slope * x0;
        const Dyadic m = mask->slope * dx;
        out.push_back({c, m, +1, true});
        out.push_back({c + mask->width, m, -1, true});
    }
    return out;
}

inline Rational integrate_endpoints(const std::vector<RawEndpoint>& raw, bool use_mask) {
    std::uint64_t scale = 0;
    for (const auto& r : raw) scale = std::max({scale, r.c.exponent(), r.m.exponent()});
    std::vector<SweepEndpoint<BigInt>> big;
    big.reserve(raw.size());
    bool small = true;
    const BigInt limit = BigInt(1) << 28;
    for (const auto& r : raw) {
        big.push_back({r.c.scaled(scale), r.m.scaled(scale), r.delta, r.mask});
        const auto& b = big.back();
        if (abs_big(b.c) >= limit || abs_big(b.m) >= limit) small = false;
    }
    Rational integral;
    if (small) {
        std::vector<SweepEndpoint<long long>> fast;
        fast.reserve(big.size());
        for (const auto& b : big) fast.push_back({b.c.convert_to<long long>(), b.m.convert_to<long long>(), b.delta, b.mask});
        integral = kinetic_integral<long long, __int128>(fast, use_mask);
    } else {
        integral = kinetic_integral<BigInt, BigInt>(big, use_mask);
    }
    return integral * Rational(BigInt(1), BigInt(1) << static_cast<unsigned>(scale));
}

} // namespace detail

// Exact area of K within x0 <= x <= x1.
inline Rational strip_measure_exact(const KSet& k, const Dyadic& x0, const Dyadic& x1) {
    if (!(x0 < x1)) throw invalid_input("strip needs x0 < x1");
    const auto raw = detail::strip_endpoints(k, x0, x1, std::nullopt);
    return detail::integrate_endpoints(raw, false) * Rational(x1 - x0);
}

// Exact area of K intersected with an open band, within x0 <= x <= x1.
inline Rational strip_measure_exact(const KSet& k, const Dyadic& x0, const Dyadic& x1, const Band& band) {
    if (!(x0 < x1)) throw invalid_input("strip needs x0 < x1");
    const auto raw = detail::strip_endpoints(k, x0, x1, band);
    return detail::integrate_endpoints(raw, true) * Rational(x1 - x0);
}

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    Dyadic box_area;
};

// Uniform samples over the bounding box of K in the strip, drawn on the
// grid of cell midpoints with 2^32 cells per axis. Each sample is an exact
// dyadic point; hit() applies the same open-interior predicate as
// KSet::contains.
class McSampler {
public:
    McSampler(const KSet& k, Dyadic x0, Dyadic x1, std::uint64_t seed)
        : k_(k), x0_(std::move(x0)), x1_(std::move(x1)), gen_(seed) {
        if (!(x0_ < x1_)) throw invalid_input("strip needs x0 < x1");
        if (k.empty()) return;
        bool first = true;
        for (const auto& p : k.parallelograms()) {
            for (const Dyadic* x : {&x0_, &x1_}) {
                const Dyadic lo = p.lower_at(*x);
                const Dyadic hi = p.upper_at(*x);
                if (first || lo < ylo_) ylo_ = lo;
                if (first || yhi_ < hi) yhi_ = hi;
                first = false;
            }
        }
        prepare_fast();
    }

    bool empty() const noexcept { return k_.empty(); }
    const Dyadic& ylo() const noexcept { return ylo_; }
    const Dyadic& yhi() const noexcept { return yhi_; }
    Dyadic box_area() const { return empty() ? Dyadic(0) : (x1_ - x0_) * (yhi_ - ylo_); }

    struct Sample {
        std::uint32_t rx;
        std::uint32_t ry;
    };
    Sample draw() {
        const std::uint64_t w = gen_();
        return {static_cast<std::uint32_t>(w >> 32), static_cast<std::uint32_t>(w)};
    }

    Dyadic x_of(const Sample& s) const {
        return x0_ + (x1_ - x0_) * Dyadic(BigInt(2 * static_cast<std::uint64_t>(s.rx) + 1), 33);
    }
    Dyadic y_of(const Sample& s) const {
        return ylo_ + (yhi_ - ylo_) * Dyadic(BigInt(2 * static_cast<std::uint64_t>(s.ry) + 1), 33);
    }

    bool hit(const Sample& s) const {
        if (empty()) return false;
        if (!fast_) return k_.contains(x_of(s), y_of(s));
        const __int128 tx = 2 * static_cast<__int128>(s.rx) + 1;
        const __int128 Y = (static_cast<__int128>(ylo_s_) << 33) + static_cast<__int128>(span_s_) * (2 * static_cast<__int128>(s.ry) + 1);
        for (const auto& g : groups_) {
            const __int128 b = Y - (static_cast<__int128>(g.g) << 33) - static_cast<__int128>(g.h) * tx;
            // last member with left * 2^33 < b
            auto it = std::lower_bound(g.left.begin(), g.left.end(), b,
                                       [](long long l, __int128 v) { return (static_cast<__int128>(l) << 33) < v; });
            while (it != g.left.begin()) {
                --it;
                const std::size_t idx = static_cast<std::size_t>(it - g.left.begin());
                if (b < (static_cast<__int128>(*it + g.width[idx]) << 33)) return true;
                if (!(b < (static_cast<__int128>(*it + g.max_width) << 33))) break;
            }
        }
        return false;
    }

private:
    struct FastGroup {
        long long g; // slope * x0, scaled
        long long h; // slope * (x1 - x0), scaled
        std::vector<long long> left;
        std::vector<long long> width;
        long long max_width = 0;
    };

    void prepare_fast() {
        const Dyadic dx = x1_ - x0_;
        const Dyadic span = yhi_ - ylo_;
        std::uint64_t e = std::max(ylo_.exponent(), span.exponent());
        std::map<Dyadic, std::vector<const Parallelogram*>> by_slope;
        for (const auto& p : k_.parallelograms()) {
            by_slope[p.slope].push_back(&p);
            e = std::max({e, (p.slope * x0_).exponent(), (p.slope * dx).exponent(), p.base.left().exponent(),
                          p.base.length().exponent()});
        }
        const BigInt limit = BigInt(1) << 28;
        auto fits = [&](const Dyadic& v) { return detail::abs_big(v.scaled(e)) < limit; };
        if (!fits(ylo_) || !fits(span)) return;
        for (auto& [slope, members] : by_slope) {
            std::sort(members.begin(), members.end(),
                      [](const Parallelogram* a, const Parallelogram* b) { return a->base.left() < b->base.left(); });
            FastGroup fg;
            const Dyadic g = slope * x0_;
            const Dyadic h = slope * dx;
            if (!fits(g) || !fits(h)) return;
            fg.g = g.scaled(e).convert_to<long long>();
            fg.h = h.scaled(e).convert_to<long long>();
            for (const auto* p : members) {
                if (!fits(p->base.left()) || !fits(p->base.right())) return;
                fg.left.push_back(p->base.left().scaled(e).convert_to<long long>());
                fg.width.push_back(p->base.length().scaled(e).convert_to<long long>());
                fg.max_width = std::max(fg.max_width, fg.width.back());
            }
            groups_.push_back(std::move(fg));
        }
        ylo_s_ = ylo_.scaled(e).convert_to<long long>();
        span_s_ = span.scaled(e).convert_to<long long>();
        fast_ = true;
    }

    const KSet& k_;
    Dyadic x0_, x1_;
    Dyadic ylo_, yhi_;
    std::mt19937_64 gen_;
    bool fast_ = false;
    long long ylo_s_ = 0, span_s_ = 0;
    std::vector<FastGroup> groups_;
};

inline McEstimate strip_measure_mc(const KSet& k, const Dyadic& x0, const Dyadic& x1, std::uint64_t samples,
                                   std::uint64_t seed) {
    if (samples < 1) throw invalid_input("need at least one sample");
    McSampler s(k, x0, x1, seed);
    McEstimate r;
    r.samples = samples;
    r.box_area = s.box_area();
    if (s.empty()) return r;
    for (std::uint64_t i = 0; i < samples; ++i)
        if (s.hit(s.draw())) ++r.hits;
    const double area = r.box_area.to_double();
    const double p = static_cast<double>(r.hits) / static_cast<double>(samples);
    r.estimate = area * p;
    r.std_error = area * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return r;
}

// Average of the indicator of K over an Omega-oriented parallelogram E that
// contains the sigma-parallelogram through p on 0 <= x <= L, where
// L = 1/(2 eta) + 1 and K is restricted to 1/(2 eta) <= x <= L.
struct WitnessResult {
    int parallelogram = -1;        // index of the sigma-parallelogram through p
    Dyadic omega;                  // chosen direction
    Rational average;              // |K2 cap E| / |E|
    Rational base;                 // 1 / L
    Rational containment;          // |rho| / |E| on 0 <= x <= L
    Rational identity;             // |K2 cap rho| / |rho|, equal to base
    std::size_t candidates = 0;
};

inline WitnessResult witness_average(const KSet& k, const Dyadic& px, const Dyadic& py,
                                     const std::vector<Dyadic>& omega_slopes, const Dyadic& eta) {
    if (!(Dyadic(0) < eta) || eta.numerator() != 1)
        throw invalid_input("eta must be a positive power of two");
    if (omega_slopes.empty()) throw invalid_input("witness needs at least one direction");
    if (px < Dyadic(0) || Dyadic(1) < px) throw invalid_input("witness point must lie in 0 <= x <= 1");
    const int idx = k.locate(px, py);
    if (idx < 0) throw invalid_input("point is not in any parallelogram");
    const auto& rho = k.parallelograms()[static_cast<std::size_t>(idx)];

    const Dyadic x2 = ldexp(Dyadic(1), static_cast<long long>(eta.exponent()) - 1); // 1/(2 eta)
    const Dyadic L = x2 + Dyadic(1);
    const Dyadic w = rho.base.length();

    WitnessResult r;
    r.parallelogram = idx;
    r.base = Rational(BigInt(1), BigInt(1)) / Rational(L);
    const Rational inside_rho = strip_measure_exact(k, x2, L, Band{rho.base.left(), w, rho.slope});
    r.identity = inside_rho / (Rational(w) * Rational(L));

    std::vector<Dyadic> cands;
    for (const auto& om : omega_slopes)
        if (!(w < abs(om - rho.slope))) cands.push_back(om);
    if (cands.empty()) {
        const Dyadic* best = &omega_slopes.front();
        for (const auto& om : omega_slopes)
            if (abs(om - rho.slope) < abs(*best - rho.slope)) best = &om;
        cands.push_back(*best);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    r.candidates = cands.size();

    bool first = true;
    for (const auto& om : cands) {
        const Dyadic delta = om - rho.slope;
        const Dyadic tilt = delta * L;
        const Dyadic lower = rho.base.left() - max(Dyadic(0), tilt);
        const Dyadic width = w + abs(tilt);
        const Rational covered = strip_measure_exact(k, x2, L, Band{lower, width, om});
        const Rational avg = covered / (Rational(width) * Rational(L));
        if (first || r.average < avg) {
            r.average = avg;
            r.omega = om;
            r.containment = Rational(w) / Rational(width);
            first = false;
        }
    }
    return r;
}

} // namespace kakeya
