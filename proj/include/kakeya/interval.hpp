// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "kakeya/bitstring.hpp"
#include "kakeya/dyadic.hpp"

namespace kakeya {

// Closed interval [lo, hi] with dyadic endpoints.
struct Interval {
    Dyadic lo;
    Dyadic hi;

    Dyadic length() const { return hi - lo; }
    Dyadic midpoint() const { return (lo + hi).half(); }
    bool contains(const Dyadic& x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Interval& o) const { return !(o.hi < lo || hi < o.lo); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Interval& i) {
    return os << '[' << i.lo << ", " << i.hi << ']';
}

// The closed dyadic interval [left, left + 2^-k].
class DyadicInterval {
public:
    DyadicInterval() = default;
    DyadicInterval(Dyadic left, std::uint64_t length_exponent) : left_(std::move(left)), k_(length_exponent) {}

    const Dyadic& left() const noexcept { return left_; }
    std::uint64_t length_exponent() const noexcept { return k_; }
    Dyadic length() const { return Dyadic::pow2(-static_cast<long long>(k_)); }
    Dyadic right() const { return left_ + length(); }
    Dyadic midpoint() const { return left_ + Dyadic::pow2(-static_cast<long long>(k_) - 1); }

    DyadicInterval lower_half() const { return {left_, k_ + 1}; }
    DyadicInterval upper_half() const { return {midpoint(), k_ + 1}; }

    bool contains(const Dyadic& x) const { return left_ <= x && x <= right(); }

    Interval closed() const { return {left_, right()}; }
    operator Interval() const { return closed(); } // NOLINT(google-explicit-constructor)

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;

private:
    Dyadic left_;
    std::uint64_t k_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const DyadicInterval& i) { return os << i.closed(); }

// Q_v for v = 0 j_1 ... j_k: [sum j_i 2^-i, sum j_i 2^-i + 2^-k].
inline DyadicInterval vertex_interval(const BitString& v) {
    const std::uint64_t k = v.height();
    return {Dyadic(v.level_index(), k), k};
}

// Gap between two closed intervals; zero when they meet or overlap.
inline Dyadic interval_distance(const Interval& a, const Interval& b) {
    if (a.hi < b.lo) return b.lo - a.hi;
    if (b.hi < a.lo) return a.lo - b.hi;
    return Dyadic(0);
}

// The interval transformations used by the constructions: reflection about
// 1/2, translation, and the midpoint-anchored maps rho_1, rho_2 (factor 1/8)
// and rho_{j,1}, rho_{j,2} (factor 2^-j).
class IntervalMap {
public:
    enum class Kind { reflect, translate, rho_lower, rho_upper };

    static IntervalMap reflect() { return IntervalMap(Kind::reflect, Dyadic(0), 0); }
    static IntervalMap translate(Dyadic h) { return IntervalMap(Kind::translate, std::move(h), 0); }
    static IntervalMap rho1() { return IntervalMap(Kind::rho_lower, Dyadic(0), 3); }
    static IntervalMap rho2() { return IntervalMap(Kind::rho_upper, Dyadic(0), 3); }
    // side is 1 (lower) or 2 (upper).
    static IntervalMap rho(std::uint64_t j, int side) {
        if (j < 1) throw invalid_input("rho_{j,i}: j must be at least 1");
        if (side != 1 && side != 2) throw invalid_input("rho_{j,i}: i must be 1 or 2");
        return IntervalMap(side == 1 ? Kind::rho_lower : Kind::rho_upper, Dyadic(0), j);
    }

    Kind kind() const noexcept { return kind_; }

    Interval operator()(const Interval& in) const {
        switch (kind_) {
        case Kind::reflect:
            return {Dyadic(1) - in.hi, Dyadic(1) - in.lo};
        case Kind::translate:
            return {in.lo + shift_, in.hi + shift_};
        case Kind::rho_lower:
        case Kind::rho_upper: {
            if (!(in.lo < in.hi)) throw invalid_input("interval map needs a non-degenerate interval");
            const Dyadic mid = in.midpoint();
            const Dyadic part = ldexp(in.length(), -static_cast<long long>(factor_exp_));
            if (kind_ == Kind::rho_lower) return {mid - part, mid};
            return {mid, mid + part};
        }
        }
        return in;
    }

private:
    IntervalMap(Kind k, Dyadic shift, std::uint64_t factor_exp) : kind_(k), shift_(std::move(shift)), factor_exp_(factor_exp) {}

    Kind kind_;
    Dyadic shift_;
    std::uint64_t factor_exp_;
};

inline Interval transform_interval(const IntervalMap& map, const Interval& in) { return map(in); }

} // namespace kakeya
