// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "kakeya/error.hpp"

namespace kakeya {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

// floor(v / 2^shift)
inline BigInt floor_shift(const BigInt& v, std::uint64_t shift) {
    if (shift == 0) return v;
    if (v >= 0) return v >> shift;
    BigInt mag = -v;
    BigInt q = mag >> shift;
    if ((q << shift) != mag) ++q;
    return -q;
}

inline double big_to_double_ldexp(const BigInt& n, long long exp2) {
    if (n == 0) return 0.0;
    BigInt mag = abs_big(n);
    auto bits = static_cast<long long>(boost::multiprecision::msb(mag));
    if (bits > 900) {
        const auto drop = static_cast<unsigned>(bits - 64);
        mag >>= drop;
        exp2 += drop;
    }
    double d = mag.convert_to<double>();
    if (n < 0) d = -d;
    return std::ldexp(d, static_cast<int>(std::clamp<long long>(exp2, -100000, 100000)));
}

} // namespace detail

// Exact dyadic rational numerator * 2^(-exponent).
//
// Kept in canonical form: the numerator is odd, or the exponent is zero
// (which covers zero and the even integers), so equal values compare equal
// structurally.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(long long n) : num_(n) {} // NOLINT(google-explicit-constructor)
    Dyadic(BigInt n, std::uint64_t exponent) : num_(std::move(n)), exp_(exponent) { normalize(); }

    // 2^k for any integer k.
    static Dyadic pow2(long long k) {
        if (k >= 0) return Dyadic(BigInt(1) << static_cast<unsigned>(k), 0);
        return Dyadic(BigInt(1), static_cast<std::uint64_t>(-k));
    }

    const BigInt& numerator() const noexcept { return num_; }
    std::uint64_t exponent() const noexcept { return exp_; }

    int sign() const noexcept { return num_.sign(); }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return exp_ == 0; }

    Dyadic operator-() const {
        Dyadic r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.exp_ == b.exp_) return Dyadic(a.num_ + b.num_, a.exp_);
        if (a.exp_ > b.exp_) return Dyadic(a.num_ + (b.num_ << static_cast<unsigned>(a.exp_ - b.exp_)), a.exp_);
        return Dyadic((a.num_ << static_cast<unsigned>(b.exp_ - a.exp_)) + b.num_, b.exp_);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_); }

    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
    Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

    // value * 2^k
    friend Dyadic ldexp(const Dyadic& a, long long k) {
        if (a.is_zero()) return a;
        if (k >= 0) {
            const auto uk = static_cast<std::uint64_t>(k);
            if (a.exp_ >= uk) return Dyadic(a.num_, a.exp_ - uk);
            return Dyadic(a.num_ << static_cast<unsigned>(uk - a.exp_), 0);
        }
        return Dyadic(a.num_, a.exp_ + static_cast<std::uint64_t>(-k));
    }

    Dyadic half() const { return ldexp(*this, -1); }

    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        if (a.exp_ == b.exp_) return cmp(a.num_, b.num_);
        if (a.sign() != b.sign()) return a.sign() <=> b.sign();
        if (a.exp_ > b.exp_) return cmp(a.num_, b.num_ << static_cast<unsigned>(a.exp_ - b.exp_));
        return cmp(a.num_ << static_cast<unsigned>(b.exp_ - a.exp_), b.num_);
    }
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.exp_ == b.exp_ && a.num_ == b.num_; }

    // value * 2^k as an exact integer; requires k >= exponent().
    BigInt scaled(std::uint64_t k) const {
        if (k < exp_) throw invalid_input("Dyadic::scaled: scale below exponent");
        return num_ << static_cast<unsigned>(k - exp_);
    }

    // floor(value * 2^k)
    BigInt floor_scaled(std::uint64_t k) const {
        if (k >= exp_) return num_ << static_cast<unsigned>(k - exp_);
        return detail::floor_shift(num_, exp_ - k);
    }

    // value * 2^k is an integer
    bool scales_to_integer(std::uint64_t k) const noexcept { return exp_ <= k; }

    double to_double() const { return detail::big_to_double_ldexp(num_, -static_cast<long long>(exp_)); }

    // "n/2^e"
    std::string to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

    // Accepts "n/2^e", "n/d" with d a power of two, or a bare integer "n".
    static Dyadic parse(std::string_view text);

    std::size_t hash() const noexcept {
        std::size_t h = std::hash<std::uint64_t>{}(exp_);
        for (auto limb = num_.backend().limbs(), end = limb + num_.backend().size(); limb != end; ++limb)
            h ^= std::hash<std::uint64_t>{}(*limb) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return num_ < 0 ? ~h : h;
    }

private:
    static std::strong_ordering cmp(const BigInt& a, const BigInt& b) {
        const int c = a.compare(b);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    void normalize() {
        if (num_ == 0) {
            exp_ = 0;
            return;
        }
        if (exp_ == 0) return;
        const auto tz = static_cast<std::uint64_t>(boost::multiprecision::lsb(detail::abs_big(num_)));
        const auto shift = std::min(tz, exp_);
        if (shift > 0) {
            num_ >>= static_cast<unsigned>(shift); // exact: low bits are zero
            exp_ -= shift;
        }
    }

    BigInt num_{0};
    std::uint64_t exp_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }
inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

namespace detail {

inline BigInt parse_big(std::string_view s, std::string_view full) {
    std::string_view digits = s;
    bool neg = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        neg = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw invalid_input("malformed dyadic number: '" + std::string(full) + "'");
    BigInt v{std::string(digits)};
    return neg ? BigInt(-v) : v;
}

} // namespace detail

inline Dyadic Dyadic::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    const std::string_view s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return Dyadic(detail::parse_big(s, text), 0);

    BigInt num = detail::parse_big(trim(s.substr(0, slash)), text);
    std::string_view den = trim(s.substr(slash + 1));
    if (den.size() > 2 && den[0] == '2' && den[1] == '^') {
        const BigInt e = detail::parse_big(den.substr(2), text);
        if (e < 0) throw invalid_input("negative exponent in '" + std::string(text) + "'");
        return Dyadic(std::move(num), e.convert_to<std::uint64_t>());
    }
    const BigInt d = detail::parse_big(den, text);
    if (d <= 0) throw invalid_input("denominator must be positive in '" + std::string(text) + "'");
    const auto e = boost::multiprecision::msb(d);
    if ((BigInt(1) << e) != d) throw invalid_input("denominator is not a power of two in '" + std::string(text) + "'");
    return Dyadic(std::move(num), e);
}

} // namespace kakeya

template <>
struct std::hash<kakeya::Dyadic> {
    std::size_t operator()(const kakeya::Dyadic& d) const noexcept { return d.hash(); }
};
