// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "kakeya/dyadic.hpp"

namespace kakeya {

// Exact rational p/q over BigInt, reduced, with q > 0. Used where quotients
// of dyadics appear (sweep breakpoints, area ratios, probabilities).
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {} // NOLINT(google-explicit-constructor)
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }
    Rational(const Dyadic& d) // NOLINT(google-explicit-constructor)
        : num_(d.numerator()), den_(BigInt(1) << static_cast<unsigned>(d.exponent())) {}

    const BigInt& numerator() const noexcept { return num_; }
    const BigInt& denominator() const noexcept { return den_; }

    int sign() const noexcept { return num_.sign(); }
    bool is_zero() const noexcept { return num_ == 0; }

    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw invalid_input("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = BigInt(a.num_ * b.den_).compare(BigInt(b.num_ * a.den_));
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    // Exact only when the reduced denominator is a power of two.
    bool is_dyadic() const {
        const auto e = boost::multiprecision::msb(den_);
        return (BigInt(1) << e) == den_;
    }
    Dyadic to_dyadic() const {
        if (!is_dyadic()) throw invalid_input("Rational " + to_string() + " is not dyadic");
        return Dyadic(num_, boost::multiprecision::msb(den_));
    }

    double to_double() const {
        if (num_ == 0) return 0.0;
        // Keep ~64 significant bits of the quotient before converting.
        const auto nb = static_cast<long long>(boost::multiprecision::msb(detail::abs_big(num_)));
        const auto db = static_cast<long long>(boost::multiprecision::msb(den_));
        const long long shift = 64 - (nb - db);
        BigInt q = shift >= 0 ? BigInt((num_ << static_cast<unsigned>(shift)) / den_)
                              : BigInt(num_ / (den_ << static_cast<unsigned>(-shift)));
        return detail::big_to_double_ldexp(q, -shift);
    }

    // "p/q"
    std::string to_string() const { return num_.str() + "/" + den_.str(); }

    static Rational parse(std::string_view text) {
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(detail::parse_big(text, text), BigInt(1));
        const auto den = text.substr(slash + 1);
        if (den.size() > 2 && den[0] == '2' && den[1] == '^') return Rational(Dyadic::parse(text));
        BigInt d = detail::parse_big(den, text);
        if (d == 0) throw invalid_input("zero denominator in '" + std::string(text) + "'");
        return Rational(detail::parse_big(text.substr(0, slash), text), std::move(d));
    }

private:
    void reduce() {
        if (den_ == 0) throw invalid_input("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_{0};
    BigInt den_{1};
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

} // namespace kakeya
