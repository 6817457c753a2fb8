// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdint>
#include <random>

#include "kakeya/bitstring.hpp"
#include "kakeya/dyadic.hpp"
#include "kakeya/interval.hpp"
#include "kakeya/rational.hpp"

using namespace kakeya;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

// value n / 2^e as an exact fraction over 2^40
long long over40(const Dyadic& x) { return x.scaled(40).convert_to<long long>(); }

} // namespace

TEST(Dyadic, CanonicalForm) {
    EXPECT_EQ(Dyadic(BigInt(6), 3), Dyadic(BigInt(3), 2));
    EXPECT_EQ(Dyadic(BigInt(6), 3).exponent(), 2U);
    EXPECT_EQ(Dyadic(BigInt(0), 9).exponent(), 0U);
    EXPECT_EQ(Dyadic(BigInt(8), 2), Dyadic(2));
    EXPECT_EQ(Dyadic(4).exponent(), 0U);
    EXPECT_EQ(d("12/16").to_string(), "3/2^2");
}

TEST(Dyadic, ParseAndFormat) {
    EXPECT_EQ(d("3/2^2"), d("3/4"));
    EXPECT_EQ(d("-5"), Dyadic(-5));
    EXPECT_EQ(d(" 1/2^100 ").exponent(), 100U);
    EXPECT_THROW(d("1/3"), invalid_input);
    EXPECT_THROW(d("x/2"), invalid_input);
    EXPECT_THROW(d("1/0"), invalid_input);
    for (const char* s : {"0/2^0", "7/2^3", "-9/2^5", "123/2^0"}) EXPECT_EQ(d(s).to_string(), s);
}

TEST(Dyadic, ArithmeticAgreesWithScaledIntegers) {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<long long> num(-4000, 4000);
    std::uniform_int_distribution<int> ex(0, 12);
    for (int i = 0; i < 2000; ++i) {
        const long long an = num(gen), bn = num(gen);
        const int ae = ex(gen), be = ex(gen);
        const Dyadic a(BigInt(an), static_cast<std::uint64_t>(ae));
        const Dyadic b(BigInt(bn), static_cast<std::uint64_t>(be));
        const long long A = an << (40 - ae), B = bn << (40 - be);
        EXPECT_EQ(over40(a + b), A + B);
        EXPECT_EQ(over40(a - b), A - B);
        EXPECT_EQ((a * b).scaled(24), BigInt(an * bn) << (24 - ae - be));
        EXPECT_EQ(a < b, A < B);
        EXPECT_EQ(a == b, A == B);
        EXPECT_EQ((a + b) - b, a);
        EXPECT_EQ(ldexp(ldexp(a, 5), -5), a);
    }
}

TEST(Dyadic, FloorScaled) {
    EXPECT_EQ(d("3/8").floor_scaled(2), 1);
    EXPECT_EQ(d("-3/8").floor_scaled(2), -2);
    EXPECT_EQ(d("1/2").floor_scaled(1), 1);
    EXPECT_TRUE(d("1/2").scales_to_integer(1));
    EXPECT_FALSE(d("1/2").scales_to_integer(0));
}

TEST(Dyadic, HugeExponents) {
    const Dyadic tiny = Dyadic::pow2(-300);
    const Dyadic x = d("3/8") + tiny;
    EXPECT_LT(d("3/8"), x);
    EXPECT_EQ(x - d("3/8"), tiny);
    EXPECT_DOUBLE_EQ(x.to_double(), 0.375);
}

TEST(Rational, ReducesAndCompares) {
    const Rational a = Rational::parse("6/8");
    EXPECT_EQ(a.to_string(), "3/4");
    EXPECT_EQ(Rational::parse("1/3") + Rational::parse("1/6"), Rational::parse("1/2"));
    EXPECT_LT(Rational::parse("1/3"), Rational::parse("34/100"));
    EXPECT_TRUE(Rational::parse("3/4").is_dyadic());
    EXPECT_FALSE(Rational::parse("1/3").is_dyadic());
    EXPECT_EQ(Rational(d("5/2^3")).to_string(), "5/8");
    EXPECT_EQ(Rational::parse("-2/-4").to_string(), "1/2");
}

TEST(BitString, StructureAndIndexing) {
    const BitString v("0110");
    EXPECT_EQ(v.height(), 3U);
    EXPECT_EQ(v.parent().str(), "011");
    EXPECT_EQ(v.child(1).str(), "01101");
    EXPECT_TRUE(BitString("01").is_ancestor_of(v));
    EXPECT_FALSE(v.is_ancestor_of(v));
    EXPECT_TRUE(v.is_ancestor_or_self_of(v));
    EXPECT_EQ(v.level_index(), 6);
    EXPECT_EQ(BitString::from_level_index(3, 6), v);
    EXPECT_EQ(BitString::from_heap_index(v.heap_index()), v);
    EXPECT_THROW(BitString("1"), invalid_input);
    EXPECT_THROW(BitString(""), invalid_input);
    EXPECT_THROW(BitString("0a"), invalid_input);
}

// Oracle: left end = sum of bit_i 2^-i computed bit by bit.
TEST(VertexInterval, MatchesBinaryExpansion) {
    EXPECT_EQ(vertex_interval(BitString("0")).closed(), (Interval{Dyadic(0), Dyadic(1)}));
    EXPECT_EQ(vertex_interval(BitString("01")).closed(), (Interval{d("1/2"), Dyadic(1)}));
    EXPECT_EQ(vertex_interval(BitString("0011")).closed(), (Interval{d("3/8"), d("1/2")}));
    EXPECT_EQ(vertex_interval(BitString("0110")).closed(), (Interval{d("3/4"), d("7/8")}));
    for (std::uint64_t heap = 1; heap < 1024; ++heap) {
        const BitString v = BitString::from_heap_index(heap);
        long long num = 0;
        const auto k = v.height();
        for (std::uint64_t i = 1; i <= k; ++i)
            if (v.str()[i] == '1') num += 1LL << (k - i);
        const auto q = vertex_interval(v);
        EXPECT_EQ(q.left(), Dyadic(BigInt(num), k));
        EXPECT_EQ(q.length(), Dyadic::pow2(-static_cast<long long>(k)));
        const auto lo = vertex_interval(v.child(0));
        const auto hi = vertex_interval(v.child(1));
        EXPECT_TRUE(q.closed().contains(lo.closed()));
        EXPECT_TRUE(q.closed().contains(hi.closed()));
        EXPECT_EQ(lo.right(), hi.left());
        EXPECT_EQ(lo.right(), q.midpoint());
    }
}

TEST(IntervalDistance, Examples) {
    EXPECT_EQ(interval_distance({Dyadic(0), d("1/4")}, {d("3/4"), Dyadic(1)}), d("1/2"));
    EXPECT_EQ(interval_distance({d("3/8"), d("1/2")}, {d("1/2"), d("5/8")}), Dyadic(0));
    EXPECT_EQ(interval_distance({Dyadic(0), d("1/2")}, {d("1/4"), d("3/4")}), Dyadic(0));
    EXPECT_EQ(interval_distance({d("3/4"), Dyadic(1)}, {Dyadic(0), d("1/4")}), d("1/2"));
}

TEST(IntervalMaps, Examples) {
    const Interval unit{Dyadic(0), Dyadic(1)};
    EXPECT_EQ(IntervalMap::rho1()(unit), (Interval{d("3/8"), d("1/2")}));
    EXPECT_EQ(IntervalMap::rho2()(IntervalMap::rho1()(unit)), (Interval{d("7/16"), d("29/64")}));
    EXPECT_EQ(IntervalMap::reflect()({d("3/8"), d("1/2")}), (Interval{d("1/2"), d("5/8")}));
    EXPECT_THROW(IntervalMap::rho1()({d("1/2"), d("1/2")}), invalid_input);
    EXPECT_THROW(IntervalMap::rho(0, 1), invalid_input);
}

TEST(IntervalMaps, Invariants) {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<long long> num(-500, 500);
    for (int i = 0; i < 300; ++i) {
        Dyadic a(BigInt(num(gen)), 6), b(BigInt(num(gen)), 6);
        if (b < a) std::swap(a, b);
        if (a == b) b = a + Dyadic::pow2(-6);
        const Interval I{a, b};
        const Dyadic h(BigInt(num(gen)), 4);
        EXPECT_EQ(IntervalMap::reflect()(IntervalMap::reflect()(I)), I);
        EXPECT_EQ(IntervalMap::translate(-h)(IntervalMap::translate(h)(I)), I);
        const Interval r1 = IntervalMap::rho1()(I), r2 = IntervalMap::rho2()(I);
        EXPECT_EQ(ldexp(r1.length(), 3), I.length());
        EXPECT_EQ(ldexp(r2.length(), 3), I.length());
        EXPECT_EQ(r1.hi, I.midpoint());
        EXPECT_EQ(r2.lo, I.midpoint());
        for (std::uint64_t j = 1; j <= 6; ++j)
            for (int side : {1, 2})
                EXPECT_EQ(ldexp(IntervalMap::rho(j, side)(I).length(), static_cast<long long>(j)), I.length());
    }
}
