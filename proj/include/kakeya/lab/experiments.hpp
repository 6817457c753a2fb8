// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "kakeya/families.hpp"
#include "kakeya/gtree.hpp"
#include "kakeya/kset.hpp"
#include "kakeya/lab/pool.hpp"
#include "kakeya/measure.hpp"
#include "kakeya/membership.hpp"
#include "kakeya/percolation.hpp"
#include "kakeya/seed.hpp"
#include "kakeya/separation.hpp"
#include "kakeya/splitting.hpp"
#include "kakeya/sticky.hpp"

namespace kakeya::lab {

// 1/(2 eta) for eta a power of two.
inline Dyadic half_inverse(const Dyadic& eta) { return ldexp(Dyadic(1), static_cast<long long>(eta.exponent()) - 1); }

// Family tree at parameter n pruned to order n.
inline std::shared_ptr<const DirTree> pruned_family_tree(FamilyKind kind, std::uint64_t n,
                                                         std::optional<std::uint64_t> depth = std::nullopt) {
    return std::make_shared<const DirTree>(prune(generate_family(kind, n, depth).tree(), n));
}

// ---- strip measures of sampled sigma --------------------------------------

struct SigmaMeasure {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    Rational k1;  // |K cap 0 <= x <= 1|
    Rational k2;  // |K cap 1/(2eta) <= x <= 1/(2eta)+1|
};

inline std::vector<SigmaMeasure> sample_measures(const std::shared_ptr<const DirTree>& t, const Dyadic& eta,
                                                 std::uint64_t count, std::uint64_t seed, unsigned threads) {
    const Dyadic a = half_inverse(eta);
    return run_indexed(count, threads, [&](std::size_t i) {
        SigmaMeasure m;
        m.index = i;
        m.seed = derive_seed(seed, i);
        const KSet k = build_kset(sample(t, t->height(), m.seed));
        m.k1 = strip_measure_exact(k, Dyadic(0), Dyadic(1));
        m.k2 = strip_measure_exact(k, a, a + Dyadic(1));
        return m;
    });
}

// ---- scaling across N ------------------------------------------------------

struct DominationPoint {
    Dyadic x, y;
    Rational probability;
    Rational survival;
    bool disjoint = true;
    bool dominated() const { return probability <= survival; }
};

struct ScalingRow {
    std::uint64_t n = 0;
    std::uint64_t h = 0;
    std::uint64_t samples = 0;
    Rational mean_k1, mean_k2;
    Rational min_k1;
    std::vector<DominationPoint> points;

    double n_mean_k2() const { return static_cast<double>(n) * mean_k2.to_double(); }
    double min_k1_scaled() const {
        return min_k1.to_double() * static_cast<double>(n) / std::log(static_cast<double>(n));
    }
    std::size_t domination_failures() const {
        std::size_t f = 0;
        for (const auto& p : points) f += p.dominated() ? 0 : 1;
        return f;
    }
};

// grid x grid odd-dyadic points with 1/(2eta) < x < 1/(2eta)+1 and
// 0 < y < x + 1, the range a line with slope in [0,1] through a base in [0,1]
// can reach. Points on an edge count as outside.
inline std::vector<std::pair<Dyadic, Dyadic>> domination_grid(const Dyadic& eta, std::uint64_t grid) {
    if (grid == 0 || (grid & (grid - 1)) != 0) throw invalid_input("grid must be a power of two");
    const Dyadic a = half_inverse(eta);
    const auto gexp = static_cast<long long>(std::log2(static_cast<double>(grid)));
    std::vector<std::pair<Dyadic, Dyadic>> out;
    for (std::uint64_t i = 0; i < grid; ++i) {
        const Dyadic x = a + Dyadic(BigInt(2 * i + 1), static_cast<std::uint64_t>(gexp + 1));
        // y in (0, x + 1)
        const Dyadic ymax = x + Dyadic(1);
        for (std::uint64_t j = 0; j < grid; ++j)
            out.emplace_back(x, ymax * Dyadic(BigInt(2 * j + 1), static_cast<std::uint64_t>(gexp + 1)));
    }
    return out;
}

inline ScalingRow lemma_scaling_row(std::uint64_t n, const Dyadic& eta, std::uint64_t count, std::uint64_t seed,
                                    std::uint64_t grid, unsigned threads) {
    auto t = pruned_family_tree(FamilyKind::quarter_cantor, n);
    ScalingRow r;
    r.n = n;
    r.h = t->height();
    r.samples = count;
    const auto ms = sample_measures(t, eta, count, derive_seed(seed, n), threads);
    Rational s1(0), s2(0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        s1 += ms[i].k1;
        s2 += ms[i].k2;
        if (i == 0 || ms[i].k1 < r.min_k1) r.min_k1 = ms[i].k1;
    }
    if (count > 0) {
        r.mean_k1 = s1 / Rational(static_cast<long long>(count));
        r.mean_k2 = s2 / Rational(static_cast<long long>(count));
    }
    if (grid > 0) {
        const auto pts = domination_grid(eta, grid);
        r.points = run_indexed(pts.size(), threads, [&](std::size_t i) {
            DominationPoint p;
            p.x = pts[i].first;
            p.y = pts[i].second;
            p.probability = membership_probability_exact(*t, t->height(), p.x, p.y);
            const GTree g = build_gtree(*t, t->height(), eta, p.x, p.y);
            p.survival = survival_probability(g.tree);
            p.disjoint = g.disjoint();
            return p;
        });
    }
    return r;
}

// ---- measure agreement -----------------------------------------------------

struct MeasureAgreement {
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    Rational exact;
    McEstimate mc;
    double deviation() const { return std::abs(mc.estimate - exact.to_double()); }
    bool within(double k) const {
        if (mc.std_error == 0.0) return deviation() <= 1e-12;
        return deviation() <= k * mc.std_error;
    }
};

inline std::vector<MeasureAgreement> measure_agreement(const std::shared_ptr<const DirTree>& t, const Strip& strip,
                                                       std::uint64_t count, std::uint64_t samples,
                                                       std::uint64_t seed, unsigned threads) {
    return run_indexed(count, threads, [&](std::size_t i) {
        MeasureAgreement m;
        m.index = i;
        m.seed = derive_seed(seed, i);
        const KSet k = build_kset(sample(t, t->height(), m.seed));
        m.exact = strip_measure_exact(k, strip.x0, strip.x1);
        m.mc = strip_measure_mc(k, strip.x0, strip.x1, samples, derive_seed(m.seed, 1));
        return m;
    });
}

// ---- witness ---------------------------------------------------------------

struct WitnessPoint {
    std::uint64_t sigma = 0;
    Dyadic x, y;
    WitnessResult w;
    bool bound_holds() const { return w.average >= w.base * w.containment; }
};

// For each sampled sigma, `per_sigma` interior points of K_{sigma,1}: a
// parallelogram picked by the seed, x an odd dyadic in (0,1), y in the
// middle of its vertical section.
inline std::vector<WitnessPoint> witness_scan(const Family& fam, const std::shared_ptr<const DirTree>& t,
                                              const Dyadic& eta, std::uint64_t count, std::uint64_t per_sigma,
                                              std::uint64_t seed, unsigned threads) {
    auto rows = run_indexed(count, threads, [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i);
        const KSet k = build_kset(sample(t, t->height(), s));
        std::mt19937_64 gen(derive_seed(s, 2));
        std::vector<WitnessPoint> pts;
        for (std::uint64_t j = 0; j < per_sigma; ++j) {
            const auto& p = k.parallelograms()[gen() % k.size()];
            const Dyadic x(BigInt(2 * (gen() % 512) + 1), 10);
            const Dyadic y = p.lower_at(x) + p.base.length().half();
            pts.push_back({i, x, y, witness_average(k, x, y, fam.directions, eta)});
        }
        return pts;
    });
    std::vector<WitnessPoint> out;
    for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

// ---- separation scan -------------------------------------------------------

struct SeparationRow {
    std::uint64_t order = 0;
    Eta eta;
    bool exact = true;
    std::uint64_t subtree_size = 0;
};

inline std::vector<SeparationRow> separation_scan(const DirTree& t, std::uint64_t max_order,
                                                  const SeparationSearchOptions& opt, unsigned threads) {
    return run_indexed(max_order, threads, [&](std::size_t i) {
        const auto r = best_separated_subtree(t, i + 1, opt);
        return SeparationRow{i + 1, r.eta, r.exact, r.subtree.size()};
    });
}

// Non-increasing, with +inf for the unconstrained value.
inline bool eta_non_increasing(const std::vector<SeparationRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (eta_less(rows[i - 1].eta, rows[i].eta)) return false;
    return true;
}

// ---- percolation -----------------------------------------------------------

struct PercolationCheck {
    bool strictly_decreasing = true;
    double max_tail_step = 0.0;  // max |(n+1)s(n+1) - n s(n)| over n >= tail_from
};

inline PercolationCheck check_percolation(const std::vector<PercolationRow>& rows, std::uint64_t tail_from) {
    PercolationCheck c;
    for (std::size_t n = 1; n < rows.size(); ++n)
        if (!(rows[n].s.hi < rows[n - 1].s.lo)) c.strictly_decreasing = false;
    for (std::size_t n = tail_from; n + 1 < rows.size(); ++n) {
        // bound on |a - b| from the enclosures
        const double a_lo = static_cast<double>(n + 1) * rows[n + 1].s.lo, a_hi = static_cast<double>(n + 1) * rows[n + 1].s.hi;
        const double b_lo = static_cast<double>(n) * rows[n].s.lo, b_hi = static_cast<double>(n) * rows[n].s.hi;
        c.max_tail_step = std::max({c.max_tail_step, std::abs(a_hi - b_lo), std::abs(b_hi - a_lo)});
    }
    return c;
}

} // namespace kakeya::lab
