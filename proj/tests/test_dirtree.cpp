// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kakeya/dirtree.hpp"
#include "kakeya/families.hpp"
#include "kakeya/separation.hpp"
#include "kakeya/splitting.hpp"
#include "support.hpp"

using namespace kakeya;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

std::vector<Dyadic> reflected(const std::vector<Dyadic>& v) {
    std::vector<Dyadic> out;
    for (const auto& x : v) out.push_back(Dyadic(1) - x);
    return out;
}

} // namespace

TEST(BuildTree, BoundaryDirectionsJoinBothSides) {
    const auto t = build_tree(std::vector<Dyadic>{d("1/2")}, 3);
    EXPECT_EQ(lacunary_value(t), 1U);
    EXPECT_TRUE(t.contains(BitString("0011")));
    EXPECT_TRUE(t.contains(BitString("0100")));
    EXPECT_EQ(t.size(), 7U);

    const auto geo = build_tree(std::vector<Dyadic>{d("1/2"), d("1/4"), d("1/8")}, 6);
    EXPECT_EQ(lacunary_value(geo), 2U);
}

// 0 is a boundary point only from the right, so the tree is a single ray.
TEST(BuildTree, LeftEndpointIsSingleRay) {
    const auto t = build_tree(std::vector<Dyadic>{Dyadic(0)}, 5);
    EXPECT_EQ(t.size(), 6U);
    EXPECT_EQ(t.height(), 5U);
    EXPECT_EQ(lacunary_value(t), 0U);
}

TEST(BuildTree, Errors) {
    EXPECT_THROW(build_tree(std::vector<Dyadic>{d("3/2")}, 3), invalid_input);
    EXPECT_THROW(build_tree(std::vector<Dyadic>{}, 3), invalid_input);
}

TEST(DirTree, RejectsMissingParent) {
    EXPECT_THROW(DirTree(std::vector<BitString>{BitString("0"), BitString("011")}), invalid_input);
    EXPECT_THROW(DirTree(std::vector<BitString>{BitString("01")}), invalid_input);
}

TEST(DirTree, TextRoundTrip) {
    const auto t = generate_family(FamilyKind::quarter_cantor, 2).tree();
    std::stringstream ss;
    ss << "# comment\n";
    t.write(ss);
    EXPECT_EQ(DirTree::read(ss), t);
}

TEST(DirTree, Truncate) {
    const auto t = DirTree::full(4).truncate(2);
    EXPECT_EQ(t, DirTree::full(2));
}

TEST(Splitting, SingleRayAndFullTrees) {
    const auto ray = build_tree(std::vector<Dyadic>{d("5/16")}, 3);
    EXPECT_EQ(lacunary_value(ray), 0U);
    for (std::uint64_t n = 0; n <= 6; ++n) EXPECT_EQ(lacunary_value(DirTree::full(n)), n);
    for (std::uint64_t n = 0; n <= 3; ++n) {
        const auto t = DirTree::full(n);
        EXPECT_EQ(brute_force_split(t, BitString::root()), n);
    }
}

TEST(Splitting, BruteForceExamples) {
    const auto t = DirTree(std::vector<BitString>{BitString("0"), BitString("00"), BitString("01")});
    EXPECT_EQ(brute_force_split(t, BitString("00")), 0U);
    EXPECT_EQ(brute_force_split(t, BitString("0")), 1U);
    EXPECT_THROW(brute_force_split(DirTree::full(5), BitString("0"), 1000.0), cap_exceeded);
}

TEST(Splitting, RecursionMatchesBruteForceOnRandomTrees) {
    std::mt19937_64 gen(2024);
    for (int k = 0; k < 40; ++k) {
        const auto t = kakeya::testing::random_tree(gen, 6, 0.35, 0.5);
        const auto rep = splitting_values(t);
        for (std::size_t i = 0; i < t.size(); ++i)
            ASSERT_EQ(rep.by_node[i], brute_force_split(t, t.nodes()[i].id)) << t.nodes()[i].id;
    }
}

TEST(Splitting, CsvReport) {
    const auto rep = splitting_values(DirTree::full(1));
    std::ostringstream os;
    rep.write_csv(os);
    EXPECT_EQ(os.str(), "vertex,height,value\r\n0,0,1\r\n00,1,0\r\n01,1,0\r\n");
    EXPECT_EQ(rep.value(BitString("0")), 1U);
}

TEST(Families, SmallCases) {
    const auto t2 = generate_family(FamilyKind::theorem2, 1);
    ASSERT_EQ(t2.directions.size(), 2U);
    EXPECT_EQ(t2.directions[0], d("3/8") + Dyadic::pow2(-100));
    EXPECT_EQ(t2.directions[1], d("1/2") + Dyadic::pow2(-100));
    EXPECT_EQ(t2.depth, 3U);

    const auto qc = generate_family(FamilyKind::quarter_cantor, 1);
    EXPECT_EQ(qc.directions[0], Dyadic::pow2(-8));
    EXPECT_EQ(qc.directions[1], d("3/4") + Dyadic::pow2(-8));
    EXPECT_EQ(qc.depth, 2U);

    const auto s5 = generate_family(FamilyKind::section5, 2);
    EXPECT_EQ(s5.intervals[0], (Interval{d("1/8"), d("1/4")}));
    EXPECT_EQ(s5.intervals[3], (Interval{d("3/4"), d("7/8")}));
    EXPECT_EQ(s5.depth, 3U);
    EXPECT_THROW(generate_family(FamilyKind::section5, 0), invalid_input);
}

TEST(Families, LacunaryValues) {
    for (std::uint64_t n = 1; n <= 4; ++n) {
        EXPECT_EQ(lacunary_value(generate_family(FamilyKind::quarter_cantor, n).tree()), n);
        EXPECT_EQ(lacunary_value(generate_family(FamilyKind::theorem2, n).tree()), n);
    }
    for (std::uint64_t n = 1; n <= 3; ++n) {
        const auto t = generate_family(FamilyKind::quarter_cantor, n).tree();
        EXPECT_EQ(brute_force_split(t, BitString::root(), 1e6), n);
    }
}

TEST(Separation, FamilyValues) {
    for (std::uint64_t n = 2; n <= 4; ++n) {
        const auto t = generate_family(FamilyKind::quarter_cantor, n).tree();
        EXPECT_EQ(separation_eta_max(t), d("1/2"));
        EXPECT_EQ(separation_eta_max(t), kakeya::testing::separation_by_pairs(t));
    }
    EXPECT_FALSE(separation_eta_max(generate_family(FamilyKind::quarter_cantor, 1).tree()).has_value());
    for (std::uint64_t n = 2; n <= 3; ++n) {
        const auto t = generate_family(FamilyKind::theorem2, n).tree();
        EXPECT_EQ(separation_eta_max(t), Dyadic(0));
    }
}

TEST(Separation, MatchesPairwiseDefinitionOnRandomTrees) {
    std::mt19937_64 gen(5);
    for (int k = 0; k < 60; ++k) {
        const auto t = kakeya::testing::random_tree(gen, 7, 0.3, 0.6);
        EXPECT_EQ(separation_eta_max(t), kakeya::testing::separation_by_pairs(t));
    }
}

TEST(Separation, ReflectionInvariant) {
    for (auto kind : {FamilyKind::quarter_cantor, FamilyKind::theorem2, FamilyKind::section5}) {
        for (std::uint64_t n = 1; n <= 3; ++n) {
            const auto f = generate_family(kind, n);
            const auto a = separation_eta_max(build_tree(f.directions, f.depth));
            const auto b = separation_eta_max(build_tree(reflected(f.directions), f.depth));
            EXPECT_EQ(a, b) << f.name();
        }
    }
}

TEST(Prune, FullTreeIsAlreadyPruned) {
    for (std::uint64_t n = 0; n <= 4; ++n) EXPECT_EQ(prune(DirTree::full(n), n), DirTree::full(n));
}

TEST(Prune, OrderZeroIsARay) {
    const auto p = prune(generate_family(FamilyKind::quarter_cantor, 3).tree(), 0);
    EXPECT_EQ(p.leaves().size(), 1U);
    EXPECT_EQ(lacunary_value(p), 0U);
}

TEST(Prune, AuditAgainstDefinition) {
    std::vector<DirTree> inputs;
    for (std::uint64_t n = 1; n <= 4; ++n) {
        inputs.push_back(generate_family(FamilyKind::quarter_cantor, n).tree());
        inputs.push_back(generate_family(FamilyKind::theorem2, n).tree());
    }
    std::mt19937_64 gen(99);
    for (int k = 0; k < 30; ++k) inputs.push_back(kakeya::testing::random_tree(gen, 8, 0.3, 0.6, 1e300));
    for (const auto& t : inputs) {
        const auto lam = lacunary_value(t);
        for (std::uint64_t n = 0; n <= lam; ++n) {
            const auto p = prune(t, n);
            EXPECT_EQ(p.leaves().size(), std::size_t{1} << n);
            EXPECT_TRUE(p.has_uniform_leaf_height());
            EXPECT_EQ(lacunary_value(p), n);
            for (const auto& ray : kakeya::testing::ray_split_values(p)) {
                ASSERT_EQ(ray.size(), n);
                for (std::uint64_t j = 0; j < n; ++j) EXPECT_EQ(ray[j], n - j);
            }
            for (const auto& node : p.nodes())
                if (!t.contains(node.id)) {
                    // padding: a single-child chain below a leaf of t
                    BitString a = node.id;
                    while (!t.contains(a)) a = a.parent();
                    EXPECT_TRUE(t.node(t.find(a)).is_leaf());
                }
            const auto et = separation_eta_max(t);
            const auto ep = separation_eta_max(p);
            if (et && ep) {
                EXPECT_FALSE(*ep < *et);
            }
        }
        EXPECT_THROW(prune(t, lam + 1), invalid_input);
    }
}

TEST(BestSeparated, QuarterCantor) {
    for (std::uint64_t n = 1; n <= 4; ++n) {
        const auto t = generate_family(FamilyKind::quarter_cantor, n).tree();
        const auto r = best_separated_subtree(t, n);
        if (n == 1) {
            EXPECT_FALSE(r.eta.has_value());
        } else {
            EXPECT_EQ(r.eta, d("1/2")) << n;
        }
        EXPECT_GE(lacunary_value(r.subtree), n);
        EXPECT_EQ(separation_eta_max(r.subtree), r.eta);
    }
}

TEST(BestSeparated, TheoremTwoTreeIsInseparable) {
    const auto t = generate_family(FamilyKind::theorem2, 2).tree();
    const auto r = best_separated_subtree(t, 2);
    EXPECT_EQ(r.eta, Dyadic(0));
    const auto [found, ex] = kakeya::testing::best_separation_exhaustive(t, 2);
    EXPECT_TRUE(found);
    EXPECT_EQ(ex, r.eta);
}

TEST(BestSeparated, MatchesExhaustiveSearch) {
    std::vector<DirTree> inputs{generate_family(FamilyKind::quarter_cantor, 2).tree(),
                                generate_family(FamilyKind::section5, 2).tree(),
                                generate_family(FamilyKind::section5, 3, 5).tree()};
    std::mt19937_64 gen(31);
    while (inputs.size() < 40) {
        auto t = kakeya::testing::random_tree(gen, 6, 0.4, 0.5, 20000.0);
        if (lacunary_value(t) >= 2) inputs.push_back(std::move(t));
    }
    for (const auto& t : inputs) {
        for (std::uint64_t n = 1; n <= lacunary_value(t); ++n) {
            const auto r = best_separated_subtree(t, n);
            const auto [found, ex] = kakeya::testing::best_separation_exhaustive(t, n);
            ASSERT_TRUE(found);
            EXPECT_TRUE(r.exact);
            EXPECT_EQ(r.eta, ex) << "n=" << n << " tree:\n" << t.to_text();
            EXPECT_EQ(kakeya::testing::separation_by_pairs(r.subtree), r.eta);
            EXPECT_GE(lacunary_value(r.subtree), n);
        }
    }
}

TEST(BestSeparated, Errors) {
    EXPECT_THROW(best_separated_subtree(DirTree::full(2), 3), invalid_input);
    SeparationSearchOptions opt;
    opt.depth_cap = 3;
    EXPECT_THROW(best_separated_subtree(DirTree::full(4), 2, opt), cap_exceeded);
}
