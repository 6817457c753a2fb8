// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "kakeya/families.hpp"
#include "kakeya/sticky.hpp"

using namespace kakeya;

namespace {

std::shared_ptr<const DirTree> share(DirTree t) { return std::make_shared<const DirTree>(std::move(t)); }

// Leaf assignments of the 16-row example map on B^4, written without the
// leading root symbol.
const std::vector<std::pair<const char*, const char*>> kTableOne = {
    {"0000", "1100"}, {"0001", "1101"}, {"0010", "1110"}, {"0011", "1111"},
    {"0100", "1011"}, {"0101", "1010"}, {"0110", "1010"}, {"0111", "1010"},
    {"1000", "0000"}, {"1001", "0001"}, {"1010", "0011"}, {"1011", "0010"},
    {"1100", "0100"}, {"1101", "0100"}, {"1110", "0101"}, {"1111", "0100"},
};

std::map<BitString, BitString> table_one_leaves() {
    std::map<BitString, BitString> m;
    for (const auto& [t, s] : kTableOne) m.emplace(BitString(std::string("0") + t), BitString(std::string("0") + s));
    return m;
}

// Direct check of the definition on every pair of vertices.
bool is_sticky(const StickyMap& m) {
    const std::size_t n = std::size_t{2} << m.height();
    for (std::size_t a = 1; a < n; ++a) {
        const BitString u = BitString::from_heap_index(a);
        if (m.image(u).height() != u.height()) return false;
        if (!m.tree().contains(m.image(u))) return false;
        for (std::size_t b = a + 1; b < n; ++b) {
            const BitString v = BitString::from_heap_index(b);
            if (u.is_ancestor_of(v) && !m.image(u).is_ancestor_of(m.image(v))) return false;
        }
    }
    return true;
}

} // namespace

TEST(Sticky, TableOneIsValid) {
    const auto full = extend_leaf_images(table_one_leaves());
    EXPECT_EQ(full.size(), 31U);
    const auto m = validate(full, share(DirTree::full(4)));
    EXPECT_EQ(m.height(), 4U);
    EXPECT_TRUE(is_sticky(m));
    EXPECT_EQ(m.image(BitString("00")).str(), "01");
    EXPECT_EQ(m.image(BitString("01")).str(), "00");
    EXPECT_EQ(m.image(BitString("00110")).str(), "01010");
}

TEST(Sticky, IdentityIsValid) {
    for (std::uint64_t h = 0; h <= 4; ++h) {
        std::map<BitString, BitString> id;
        for (std::uint64_t i = 1; i < (std::uint64_t{2} << h); ++i) {
            const auto v = BitString::from_heap_index(i);
            id.emplace(v, v);
        }
        const auto m = validate(id, share(DirTree::full(h)));
        EXPECT_TRUE(is_sticky(m));
    }
}

TEST(Sticky, ValidateReportsOffendingVertex) {
    auto tree = share(DirTree::full(2));
    std::map<BitString, BitString> bad{{BitString("0"), BitString("0")},
                                       {BitString("00"), BitString("00")},
                                       {BitString("000"), BitString("011")}};
    try {
        validate(bad, tree);
        FAIL() << "expected ancestry violation";
    } catch (const invalid_input& e) {
        EXPECT_NE(std::string(e.what()).find("ancestry violation at 000"), std::string::npos) << e.what();
    }
    std::map<BitString, BitString> height{{BitString("0"), BitString("0")}, {BitString("00"), BitString("000")}};
    EXPECT_THROW(validate(height, tree), invalid_input);
    auto ray = share(build_tree(std::vector<Dyadic>{Dyadic(0)}, 1));
    std::map<BitString, BitString> outside{{BitString("0"), BitString("0")}, {BitString("00"), BitString("01")}};
    EXPECT_THROW(validate(outside, ray), invalid_input);
    std::map<BitString, BitString> partial{{BitString("0"), BitString("0")}, {BitString("00"), BitString("00")}};
    EXPECT_THROW(validate(partial, tree), invalid_input);
}

TEST(Sticky, ExtendRejectsInconsistentLeaves) {
    std::map<BitString, BitString> leaves{{BitString("00"), BitString("00")}, {BitString("01"), BitString("01")},
                                          {BitString("000"), BitString("011")}};
    EXPECT_THROW(extend_leaf_images(leaves), invalid_input);
}

TEST(Sticky, SamplesAreValidAndDeterministic) {
    auto tree = share(generate_family(FamilyKind::quarter_cantor, 3).tree());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto a = sample(tree, 6, seed);
        EXPECT_TRUE(is_sticky(a));
        EXPECT_EQ(a, sample(tree, 6, seed));
    }
    EXPECT_THROW(sample(share(DirTree::full(2)), 3, 1), invalid_input);
}

TEST(Sticky, SingleRayHasOneMap) {
    auto ray = share(build_tree(std::vector<Dyadic>{Dyadic(0)}, 4));
    EXPECT_EQ(count_sticky(*ray, 4), 1);
    const auto a = sample(ray, 4, 1), b = sample(ray, 4, 2);
    for (std::uint64_t j = 0; j < a.leaf_count(); ++j) EXPECT_EQ(a.leaf_image_index(j), b.leaf_image_index(j));
}

// Two independent binary choices at the height-1 vertices: four maps, each
// with probability 1/4.
TEST(Sticky, UniformOnFullTreeOfHeightOne) {
    auto tree = share(DirTree::full(1));
    EXPECT_EQ(count_sticky(*tree, 1), 4);
    std::map<std::pair<int, int>, int> freq;
    const int draws = 100000;
    for (int s = 0; s < draws; ++s) {
        const auto m = sample(tree, 1, static_cast<std::uint64_t>(s));
        ++freq[{m.leaf_image_index(0), m.leaf_image_index(1)}];
    }
    ASSERT_EQ(freq.size(), 4U);
    const double p = 0.25, sd = std::sqrt(draws * p * (1 - p));
    double chi2 = 0;
    for (const auto& [k, c] : freq) {
        EXPECT_NEAR(c, draws * p, 3 * sd);
        chi2 += (c - draws * p) * (c - draws * p) / (draws * p);
    }
    // 3 degrees of freedom: mean 3, sd sqrt(6)
    EXPECT_LT(chi2, 3 + 3 * std::sqrt(6.0));
}

TEST(Sticky, TheoremTwoSmallCase) {
    auto tree = share(generate_family(FamilyKind::theorem2, 1).tree());
    EXPECT_EQ(count_sticky(*tree, 3), 4);
    std::set<std::vector<int>> seen;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const auto m = sample(tree, 3, s);
        std::vector<int> key;
        for (std::uint64_t j = 0; j < m.leaf_count(); ++j) key.push_back(m.leaf_image_index(j));
        seen.insert(key);
    }
    EXPECT_EQ(seen.size(), 4U);
}

// 2^(number of non-root vertices)
TEST(Sticky, CountOnFullTrees) {
    for (std::uint64_t h = 0; h <= 3; ++h)
        EXPECT_EQ(count_sticky(DirTree::full(h), h), BigInt(1) << static_cast<unsigned>((std::uint64_t{2} << h) - 2));
}

TEST(Sticky, RestrictedEnumerationExamples) {
    auto ray = build_tree(std::vector<Dyadic>{Dyadic(0)}, 3);
    int calls = 0;
    enumerate_restricted(ray, 3, {BitString("0000")}, [&](const RestrictedAssignment&, const Dyadic& w) {
        ++calls;
        EXPECT_EQ(w, Dyadic(1));
    });
    EXPECT_EQ(calls, 1);

    const auto t2 = generate_family(FamilyKind::theorem2, 1).tree();
    std::vector<Dyadic> weights;
    std::set<int> images_of_01;
    enumerate_restricted(t2, 3, {BitString("0100"), BitString("0101")},
                         [&](const RestrictedAssignment& a, const Dyadic& w) {
                             weights.push_back(w);
                             images_of_01.insert(a.image_of(BitString("01").heap_index()));
                         });
    ASSERT_EQ(weights.size(), 2U);
    EXPECT_EQ(weights[0], Dyadic::pow2(-1));
    EXPECT_EQ(weights[1], Dyadic::pow2(-1));
    EXPECT_EQ(images_of_01.size(), 2U);

    weights.clear();
    enumerate_restricted(DirTree::full(1), 1, {BitString("00"), BitString("01")},
                         [&](const RestrictedAssignment&, const Dyadic& w) { weights.push_back(w); });
    ASSERT_EQ(weights.size(), 4U);
    for (const auto& w : weights) EXPECT_EQ(w, Dyadic::pow2(-2));
}

TEST(Sticky, RestrictedWeightsSumToOne) {
    auto tree = generate_family(FamilyKind::quarter_cantor, 3).tree();
    std::vector<BitString> rel{BitString("0000000"), BitString("0011010"), BitString("0110001"), BitString("0111111")};
    Dyadic total(0);
    std::size_t calls = 0;
    enumerate_restricted(tree, 6, rel, [&](const RestrictedAssignment&, const Dyadic& w) {
        total += w;
        ++calls;
    });
    EXPECT_EQ(total, Dyadic(1));
    EXPECT_EQ(BigInt(calls), count_restricted(tree, 6, rel));
    EXPECT_THROW(enumerate_restricted(tree, 6, rel, [](const RestrictedAssignment&, const Dyadic&) {}, 2.0),
                 cap_exceeded);
}

TEST(Sticky, TextFormat) {
    const auto m = sample(share(DirTree::full(1)), 1, 3);
    const auto text = m.to_text();
    EXPECT_EQ(text.substr(0, 4), "0 0\n");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
