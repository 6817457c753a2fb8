// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kakeya/dirtree.hpp"
#include "kakeya/error.hpp"
#include "kakeya/gtree.hpp"
#include "kakeya/kset.hpp"
#include "kakeya/lab/config.hpp"
#include "kakeya/lab/experiments.hpp"
#include "kakeya/lab/report.hpp"
#include "kakeya/measure.hpp"
#include "kakeya/membership.hpp"
#include "kakeya/percolation.hpp"
#include "kakeya/separation.hpp"
#include "kakeya/splitting.hpp"
#include "kakeya/sticky.hpp"
#include "kakeya/svg.hpp"
#include "kakeya/theorem2.hpp"

namespace kakeya::lab {

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_invalid = 2, exit_cap = 3, exit_check = 4 };

struct CommandResult {
    int exit_code = exit_ok;
    std::vector<std::string> lines;     // human summary
    std::vector<std::string> failures;  // --check violations
    std::vector<std::string> artifacts;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

class Run {
public:
    Run(const ExperimentConfig& c, const std::string& command)
        : cfg(c), out(c.out, c.hash(command)), command_(command) {}

    const ExperimentConfig& cfg;
    ArtifactWriter out;
    CommandResult result;

    void line(std::string s) { result.lines.push_back(std::move(s)); }

    // Records a threshold; only --check turns a miss into a failure.
    void expect(bool ok, const std::string& what) {
        checks_.push_back({{"check", what}, {"pass", ok}});
        if (!ok) result.failures.push_back(what);
    }

    CommandResult finish(json doc) {
        json d;
        d["command"] = command_;
        d["config"] = config_json();
        for (auto& [k, v] : doc.items()) d[k] = std::move(v);
        d["checks"] = checks_;
        out.document(command_ + ".json", std::move(d));
        result.artifacts = out.written();
        if (cfg.check && !result.failures.empty()) result.exit_code = exit_check;
        return std::move(result);
    }

private:
    json config_json() const {
        json j;
        std::istringstream is(cfg.canonical());
        std::string kv;
        while (std::getline(is, kv)) {
            const auto eq = kv.find('=');
            j[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        return j;
    }

    std::string command_;
    json checks_ = json::array();
};

inline void require_depth(const ExperimentConfig& c, std::uint64_t depth) {
    if (depth > c.cap_depth)
        throw cap_exceeded("tree depth " + std::to_string(depth) + " exceeds cap-depth " + std::to_string(c.cap_depth),
                           static_cast<double>(depth), static_cast<double>(c.cap_depth));
}

inline std::string tree_name(const ExperimentConfig& c) {
    std::string s = c.directions.empty() ? to_string(c.family) + "(" + std::to_string(c.n) + ")" : "directions";
    if (c.order) s += " pruned to order " + std::to_string(*c.order);
    return s;
}

// The tree named by the config: explicit directions at `depth` (default 8),
// otherwise the family at parameter N, then pruned when `order` is set.
inline DirTree config_tree(const ExperimentConfig& c) {
    DirTree t;
    if (!c.directions.empty()) {
        const std::uint64_t depth = c.depth.value_or(8);
        require_depth(c, depth);
        t = build_tree(c.directions, depth);
    } else {
        const Family f = c.make_family(c.n);
        require_depth(c, f.depth);
        t = f.tree();
    }
    if (c.order) t = prune(t, *c.order);
    return t;
}

inline std::vector<Dyadic> config_directions(const ExperimentConfig& c) {
    return c.directions.empty() ? c.make_family(c.n).directions : c.directions;
}

inline Strip default_strip(const ExperimentConfig& c) { return c.strip.value_or(Strip{Dyadic(0), Dyadic(1)}); }

inline void require_samples_cap(const ExperimentConfig& c, std::uint64_t n, const char* what) {
    if (static_cast<double>(n) > c.cap_enum)
        throw cap_exceeded(std::string(what) + " " + std::to_string(n) + " exceeds cap-enum",
                           static_cast<double>(n), c.cap_enum);
}

} // namespace detail

// ---- commands --------------------------------------------------------------

inline CommandResult cmd_tree_info(const ExperimentConfig& c) {
    detail::Run run(c, "tree-info");
    const DirTree t = detail::config_tree(c);
    const SplitReport rep = splitting_values(t);
    const Eta eta = separation_eta_max(t);

    std::vector<std::vector<std::string>> rows;
    for (const auto& [v, val] : rep.values) rows.push_back({v.str(), std::to_string(v.height()), std::to_string(val)});
    run.out.csv("splits.csv", {"vertex", "height", "value"}, rows);
    run.out.text("tree.txt", t.to_text());

    std::size_t splitting = 0;
    for (const auto& n : t.nodes()) splitting += n.splits() ? 1 : 0;
    run.line("tree " + detail::tree_name(c) + ": " + std::to_string(t.size()) + " vertices, height " +
             std::to_string(t.height()) + ", " + std::to_string(splitting) + " splitting");
    run.line("λ = " + std::to_string(rep.lambda));
    run.line("η_max = " + eta_str(eta));

    if (c.directions.empty() && !c.order) {
        if (c.family == FamilyKind::quarter_cantor) run.expect(eta && *eta == Dyadic::pow2(-1), "eta_max = 1/2");
        if (c.family == FamilyKind::theorem2) run.expect(eta && *eta == Dyadic(0), "eta_max = 0");
    }
    return run.finish({{"tree", detail::tree_name(c)},
                       {"vertices", t.size()},
                       {"height", t.height()},
                       {"splitting_vertices", splitting},
                       {"lambda", rep.lambda},
                       {"eta_max", eta_str(eta)}});
}

inline CommandResult cmd_prune(const ExperimentConfig& c) {
    detail::Run run(c, "prune");
    ExperimentConfig base = c;
    base.order.reset();
    const DirTree t = detail::config_tree(base);
    const std::uint64_t n = c.order.value_or(splitting_values(t).lambda);
    const DirTree p = prune(t, n);
    const auto rep = splitting_values(p);
    run.out.text("pruned.txt", p.to_text());
    run.line("pruned to order " + std::to_string(n) + ": " + std::to_string(p.size()) + " vertices, height " +
             std::to_string(p.height()) + ", λ = " + std::to_string(rep.lambda));
    run.expect(rep.lambda == n, "pruned tree has value " + std::to_string(n));
    return run.finish({{"order", n},
                       {"vertices", p.size()},
                       {"height", p.height()},
                       {"leaves", p.leaves().size()},
                       {"lambda", rep.lambda}});
}

inline CommandResult cmd_ksigma(const ExperimentConfig& c) {
    detail::Run run(c, "ksigma");
    auto t = std::make_shared<const DirTree>(detail::config_tree(c));
    const Strip s = detail::default_strip(c);
    const std::uint64_t h = t->height();
    detail::require_samples_cap(c, c.count, "sigma count");

    struct Row {
        std::uint64_t seed;
        std::size_t parallelograms;
        Rational measure;
        std::string svg, map;
    };
    const auto rows = run_indexed(c.count, c.threads, [&](std::size_t i) {
        const std::uint64_t seed = derive_seed(c.seed, i);
        const StickyMap m = sample(t, h, seed);
        const KSet k = build_kset(m);
        SvgStyle st;
        st.comment = "config_hash " + run.out.hash() + " sigma " + std::to_string(i) + " seed " + std::to_string(seed);
        return Row{seed, k.size(), strip_measure_exact(k, s.x0, s.x1), to_svg(k, s.x0, s.x1, st), m.to_text()};
    });
    std::vector<std::vector<std::string>> csv;
    json sig = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string name = "sigma_" + std::to_string(i);
        run.out.text(name + ".svg", rows[i].svg);
        run.out.text(name + ".txt", rows[i].map);
        csv.push_back({std::to_string(i), std::to_string(rows[i].seed), std::to_string(rows[i].parallelograms),
                       frac(rows[i].measure), detail::fmt_double(rows[i].measure.to_double())});
        sig.push_back({{"index", i},
                       {"seed", rows[i].seed},
                       {"parallelograms", rows[i].parallelograms},
                       {"measure", frac(rows[i].measure)}});
        run.line(name + ": " + std::to_string(rows[i].parallelograms) + " parallelograms, |K| = " +
                 show(rows[i].measure) + " on [" + show(s.x0) + ", " + show(s.x1) + "]");
    }
    run.out.csv("ksigma.csv", {"index", "seed", "parallelograms", "measure", "measure_approx"}, csv);
    return run.finish({{"tree", detail::tree_name(c)},
                       {"height", h},
                       {"strip", {frac(s.x0), frac(s.x1)}},
                       {"sigma", sig}});
}

inline CommandResult cmd_measure(const ExperimentConfig& c) {
    detail::Run run(c, "measure");
    auto t = std::make_shared<const DirTree>(detail::config_tree(c));
    const Strip s = detail::default_strip(c);
    detail::require_samples_cap(c, c.count, "sigma count");
    const auto rows = measure_agreement(t, s, c.count, c.samples, c.seed, c.threads);

    std::vector<std::vector<std::string>> csv;
    json arr = json::array();
    std::size_t within = 0;
    for (const auto& r : rows) {
        const bool ok = r.within(3.0);
        within += ok ? 1 : 0;
        csv.push_back({std::to_string(r.index), std::to_string(r.seed), frac(r.exact),
                       detail::fmt_double(r.exact.to_double()), detail::fmt_double(r.mc.estimate),
                       detail::fmt_double(r.mc.std_error), std::to_string(r.mc.hits), std::to_string(r.mc.samples),
                       detail::bool_str(ok)});
        arr.push_back({{"index", r.index},
                       {"seed", r.seed},
                       {"exact", frac(r.exact)},
                       {"mc", r.mc.estimate},
                       {"std_error", r.mc.std_error},
                       {"hits", r.mc.hits}});
    }
    run.out.csv("measure.csv",
                {"index", "seed", "exact", "exact_approx", "mc", "std_error", "hits", "samples", "within_3se"}, csv);
    run.line(std::to_string(within) + "/" + std::to_string(rows.size()) + " strip measures within 3 standard errors (" +
             std::to_string(c.samples) + " samples each)");
    run.expect(within == rows.size(), "exact and Monte Carlo measures agree within 3 standard errors");
    return run.finish({{"tree", detail::tree_name(c)},
                       {"strip", {frac(s.x0), frac(s.x1)}},
                       {"samples", c.samples},
                       {"within", within},
                       {"rows", arr}});
}

inline CommandResult cmd_prob(const ExperimentConfig& c) {
    detail::Run run(c, "prob");
    auto t = std::make_shared<const DirTree>(detail::config_tree(c));
    const std::uint64_t h = t->height();
    std::vector<std::pair<Dyadic, Dyadic>> pts;
    if (c.point) pts.push_back(*c.point);
    else pts = domination_grid(c.eta, c.grid);

    struct Row {
        Rational exact, survival;
        bool gtree = false, disjoint = false;
        MembershipEstimate mc;
        std::size_t poss = 0;
    };
    const Dyadic x_min = half_inverse(c.eta);
    const auto rows = run_indexed(pts.size(), c.threads, [&](std::size_t i) {
        const auto& [x, y] = pts[i];
        Row r;
        r.exact = membership_probability_exact(*t, h, x, y);
        r.poss = poss_set(*t, h, x, y).pairs.size();
        if (c.samples > 0) r.mc = membership_probability_mc(t, h, x, y, c.samples, derive_seed(c.seed, i));
        if (x_min < x) {
            const GTree g = build_gtree(*t, h, c.eta, x, y);
            r.gtree = true;
            r.survival = survival_probability(g.tree);
            r.disjoint = g.disjoint();
        }
        return r;
    });

    std::vector<std::vector<std::string>> csv;
    json arr = json::array();
    std::size_t dominated = 0, tested = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool dom = r.gtree && r.exact <= r.survival;
        if (r.gtree) {
            ++tested;
            dominated += dom ? 1 : 0;
        }
        csv.push_back({frac(pts[i].first), frac(pts[i].second), std::to_string(r.poss),
                       frac(r.exact), detail::fmt_double(r.exact.to_double()),
                       c.samples ? detail::fmt_double(r.mc.estimate) : "",
                       c.samples ? detail::fmt_double(r.mc.std_error) : "",
                       r.gtree ? frac(r.survival) : "", r.gtree ? detail::bool_str(r.disjoint) : "",
                       r.gtree ? detail::bool_str(dom) : ""});
        json j{{"x", frac(pts[i].first)},
               {"y", frac(pts[i].second)},
               {"poss", r.poss},
               {"exact", frac(r.exact)}};
        if (c.samples) j["mc"] = r.mc.estimate;
        if (r.gtree) {
            j["survival"] = frac(r.survival);
            j["dominated"] = dom;
        }
        arr.push_back(std::move(j));
    }
    run.out.csv("prob.csv",
                {"x", "y", "poss", "exact", "exact_approx", "mc", "std_error", "survival", "disjoint", "dominated"},
                csv);
    if (pts.size() == 1) {
        run.line("Pr[(" + show(pts[0].first) + ", " + show(pts[0].second) + ") in K] = " +
                 show(rows[0].exact) + " (exact)" +
                 (c.samples ? ", " + detail::fmt_double(rows[0].mc.estimate) + " (Monte Carlo)" : ""));
    } else {
        run.line(std::to_string(pts.size()) + " points scanned");
    }
    if (tested > 0) {
        run.line(std::to_string(dominated) + "/" + std::to_string(tested) +
                 " points with x > 1/(2η) dominated by percolation survival");
        run.expect(dominated == tested, "membership probability <= survival probability");
    }
    return run.finish({{"tree", detail::tree_name(c)}, {"height", h}, {"points", arr}});
}

inline CommandResult cmd_gtree(const ExperimentConfig& c) {
    detail::Run run(c, "gtree");
    if (!c.point) throw invalid_input("gtree needs --point x,y");
    const DirTree t = detail::config_tree(c);
    const auto& [x, y] = *c.point;
    const GTree g = build_gtree(t, t.height(), c.eta, x, y);
    const Rational pr = membership_probability_exact(t, t.height(), x, y);
    const Rational s = survival_probability(g.tree);
    run.out.text("gtree.txt", g.tree.to_text());

    json splits = json::array();
    for (const auto& sp : g.splits)
        splits.push_back({{"node", t.id(sp.node).str()},
                          {"level", sp.level},
                          {"side", sp.side},
                          {"intercepts", {frac(sp.intercepts.lo), frac(sp.intercepts.hi)}}});
    json diags = json::array();
    for (const auto& d : g.diagnostics)
        diags.push_back({{"kind", to_string(d.kind)}, {"level", d.level}, {"message", d.message}});
    std::vector<std::vector<std::string>> rows;
    for (std::size_t j = 0; j < g.level_counts.size(); ++j)
        rows.push_back({std::to_string(j), std::to_string(g.level_counts[j]),
                        j < g.level_bounds.size() ? std::to_string(g.level_bounds[j]) : ""});
    run.out.csv("gtree_levels.csv", {"level", "count", "bound"}, rows);

    run.line("G tree: " + std::to_string(g.tree.size()) + " vertices, height " + std::to_string(g.height()) + ", " +
             std::to_string(g.diagnostics.size()) + " diagnostics");
    run.line("Pr = " + show(pr) + ", survival = " + show(s));
    run.expect(pr <= s, "membership probability <= survival probability");
    return run.finish({{"point", {frac(x), frac(y)}},
                       {"height", g.height()},
                       {"vertices", g.tree.size()},
                       {"disjoint", g.disjoint()},
                       {"counts_within_bounds", g.counts_within_bounds()},
                       {"probability", frac(pr)},
                       {"survival", frac(s)},
                       {"splits", splits},
                       {"diagnostics", diags}});
}

inline CommandResult cmd_percolation(const ExperimentConfig& c) {
    detail::Run run(c, "percolation");
    const Rational half(BigInt(1), BigInt(2));
    const auto rows = full_binary_survival(c.n, half);
    std::vector<std::vector<std::string>> csv;
    json arr = json::array();
    for (const auto& r : rows) {
        csv.push_back({std::to_string(r.n), r.exact ? frac(*r.exact) : "", detail::fmt_double(r.s.lo),
                       detail::fmt_double(r.s.hi), detail::fmt_double(static_cast<double>(r.n) * r.s.mid())});
        json j{{"n", r.n}, {"lo", r.s.lo}, {"hi", r.s.hi}};
        if (r.exact) j["exact"] = frac(*r.exact);
        arr.push_back(std::move(j));
    }
    run.out.csv("percolation.csv", {"n", "exact", "lo", "hi", "n_times_s"}, csv);
    for (const auto& r : rows)
        if (r.n >= 1 && r.n <= 3) run.line("s(" + std::to_string(r.n) + ") = " + (r.exact ? show(*r.exact) : ""));

    if (rows.size() > 1) run.expect(rows[1].exact && *rows[1].exact == Rational(BigInt(3), BigInt(4)), "s(1) = 3/4");
    if (rows.size() > 2) run.expect(rows[2].exact && *rows[2].exact == Rational(BigInt(39), BigInt(64)), "s(2) = 39/64");
    const auto pc = check_percolation(rows, 50);
    run.expect(pc.strictly_decreasing, "s(n) strictly decreasing");
    if (rows.size() > 51) {
        run.line("max |(n+1)s(n+1) - n s(n)| for n >= 50: " + detail::fmt_double(pc.max_tail_step));
        run.expect(pc.max_tail_step < 0.05, "n s(n) successive differences < 0.05 for n >= 50");
    }
    return run.finish({{"p", frac(half)}, {"rows", arr}});
}

inline CommandResult cmd_counterexample(const ExperimentConfig& c) {
    detail::Run run(c, "counterexample");
    Theorem2Options opt;
    opt.mc_samples = c.samples;
    opt.seed = c.seed;
    opt.cap = c.cap_enum;
    const Theorem2Report r = verify_theorem2(c.n, opt);
    const std::string pt = "(" + show(r.x) + ", " + show(r.y) + ")";

    json tour = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : r.tournament) {
        std::string winners;
        json w = json::array();
        for (std::size_t i : e.winners) {
            const auto& p = r.poss.pairs[i];
            winners += (winners.empty() ? "" : " ") + p.base.str() + "@" + frac(p.slope);
            w.push_back({{"base", p.base.str()}, {"slope", frac(p.slope)}});
        }
        rows.push_back({std::to_string(e.index), frac(e.weight), winners});
        tour.push_back({{"index", e.index}, {"weight", frac(e.weight)}, {"winners", w}});
    }
    run.out.csv("tournament.csv", {"assignment", "weight", "winners"}, rows);

    std::string head = "Pr = " + show(r.exact) + " (exact)";
    if (r.maps) head += ", " + std::to_string(r.maps_hit) + "/" + std::to_string(*r.maps) + " maps hit " + pt;
    else head += ", point " + pt;
    run.line(head);
    run.line("restricted enumeration: " + std::to_string(r.tournament.size()) + " assignments, probability " +
             show(r.restricted_probability));
    run.line("Monte Carlo: " + std::to_string(r.mc_hits) + "/" + std::to_string(r.mc_samples) + " hits");
    run.expect(r.exact == Rational(1), "membership probability is exactly 1");
    run.expect(r.restricted_probability == Dyadic(1), "restricted enumeration gives 1");
    run.expect(r.mc_hits == r.mc_samples, "every Monte Carlo sample hits");
    if (r.maps) run.expect(r.maps_hit == *r.maps, "every sticky map hits");

    json poss = json::array();
    for (const auto& p : r.poss.pairs) poss.push_back({{"base", p.base.str()}, {"slope", frac(p.slope)}});
    json doc{{"N", r.n},
             {"height", r.h},
             {"point", {frac(r.x), frac(r.y)}},
             {"probability", frac(r.exact)},
             {"restricted_probability", frac(r.restricted_probability)},
             {"mc_samples", r.mc_samples},
             {"mc_hits", r.mc_hits},
             {"poss", poss},
             {"tournament", tour}};
    if (r.maps) {
        doc["maps"] = *r.maps;
        doc["maps_hit"] = r.maps_hit;
    }
    return run.finish(std::move(doc));
}

inline CommandResult cmd_separation_scan(const ExperimentConfig& c) {
    detail::Run run(c, "separation-scan");
    ExperimentConfig base = c;
    base.order.reset();
    const DirTree t = detail::config_tree(base);
    SeparationSearchOptions opt;
    opt.depth_cap = c.cap_depth;
    const std::uint64_t max_order = c.order.value_or(std::min<std::uint64_t>(c.n, splitting_values(t).lambda));
    const auto rows = separation_scan(t, max_order, opt, c.threads);

    std::vector<std::vector<std::string>> csv;
    json arr = json::array();
    for (const auto& r : rows) {
        csv.push_back({std::to_string(r.order), eta_str(r.eta), detail::bool_str(r.exact),
                       std::to_string(r.subtree_size)});
        arr.push_back({{"order", r.order}, {"eta_max", eta_str(r.eta)}, {"exact", r.exact},
                       {"subtree_vertices", r.subtree_size}});
        run.line("η_max(" + std::to_string(r.order) + ") = " + eta_str(r.eta));
    }
    run.out.csv("separation.csv", {"order", "eta_max", "exact", "subtree_vertices"}, csv);
    run.expect(eta_non_increasing(rows), "eta_max non-increasing in the order");
    if (rows.size() > 1)
        run.expect(eta_less(rows.back().eta, rows.front().eta), "eta_max at the largest order below eta_max(1)");
    return run.finish({{"tree", detail::tree_name(base)}, {"height", t.height()}, {"rows", arr}});
}

inline CommandResult cmd_lemma_scaling(const ExperimentConfig& c) {
    detail::Run run(c, "lemma-scaling");
    if (c.family != FamilyKind::quarter_cantor || !c.directions.empty())
        throw invalid_input("lemma-scaling runs on the quarter_cantor family");
    const std::uint64_t lo = std::max<std::uint64_t>(c.n_min, 2);
    if (c.n < lo) throw invalid_input("lemma-scaling needs N >= N-min >= 2");
    detail::require_samples_cap(c, c.count, "sigma count");

    std::vector<ScalingRow> rows;
    for (std::uint64_t n = lo; n <= c.n; ++n) {
        detail::require_depth(c, 2 * n);
        rows.push_back(lemma_scaling_row(n, c.eta, c.count, c.seed, c.grid, c.threads));
    }

    std::vector<std::vector<std::string>> csv, dom;
    json arr = json::array();
    std::size_t failures = 0, points = 0;
    for (const auto& r : rows) {
        csv.push_back({std::to_string(r.n), std::to_string(r.h), std::to_string(r.samples), frac(r.mean_k1),
                       frac(r.mean_k2), frac(r.min_k1), detail::fmt_double(r.n_mean_k2()),
                       detail::fmt_double(r.min_k1_scaled()), std::to_string(r.points.size()),
                       std::to_string(r.domination_failures())});
        for (const auto& p : r.points)
            dom.push_back({std::to_string(r.n), frac(p.x), frac(p.y), frac(p.probability),
                           frac(p.survival), detail::bool_str(p.disjoint), detail::bool_str(p.dominated())});
        arr.push_back({{"N", r.n},
                       {"height", r.h},
                       {"samples", r.samples},
                       {"mean_k1", frac(r.mean_k1)},
                       {"mean_k2", frac(r.mean_k2)},
                       {"min_k1", frac(r.min_k1)},
                       {"N_mean_k2", r.n_mean_k2()},
                       {"min_k1_N_over_logN", r.min_k1_scaled()},
                       {"domination_points", r.points.size()},
                       {"domination_failures", r.domination_failures()}});
        failures += r.domination_failures();
        points += r.points.size();
        run.line("N = " + std::to_string(r.n) + ": N·mean|K2| = " + detail::fmt_double(r.n_mean_k2()) +
                 ", min|K1|·N/log N = " + detail::fmt_double(r.min_k1_scaled()));
    }
    run.out.csv("lemma_scaling.csv",
                {"N", "height", "samples", "mean_k1", "mean_k2", "min_k1", "N_mean_k2", "min_k1_N_over_logN",
                 "domination_points", "domination_failures"},
                csv);
    run.out.csv("domination.csv", {"N", "x", "y", "probability", "survival", "disjoint", "dominated"}, dom);

    const double k2_ref = rows.front().n_mean_k2(), k1_ref = rows.front().min_k1_scaled();
    bool k2_ok = true, k1_ok = true;
    for (const auto& r : rows) {
        k2_ok = k2_ok && r.n_mean_k2() <= 2.0 * k2_ref && r.n_mean_k2() >= 0.5 * k2_ref;
        k1_ok = k1_ok && r.min_k1_scaled() >= 0.5 * k1_ref;
    }
    run.line(std::to_string(points - failures) + "/" + std::to_string(points) + " grid points dominated");
    run.expect(k2_ok, "N·mean|K2| within a factor 2 of its first value");
    run.expect(k1_ok, "min|K1|·N/log N at least half its first value");
    run.expect(failures == 0, "membership probability <= survival probability on the grid");
    return run.finish({{"eta", frac(c.eta)}, {"rows", arr}});
}

// ---- dispatch --------------------------------------------------------------

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"tree-info", "prune",           "ksigma",          "measure",
                                                "prob",      "gtree",           "percolation",     "counterexample",
                                                "separation-scan", "lemma-scaling"};
    return names;
}

inline CommandResult run_command(const std::string& name, const ExperimentConfig& c) {
    static const std::map<std::string, std::function<CommandResult(const ExperimentConfig&)>> table{
        {"tree-info", cmd_tree_info},
        {"prune", cmd_prune},
        {"ksigma", cmd_ksigma},
        {"measure", cmd_measure},
        {"prob", cmd_prob},
        {"gtree", cmd_gtree},
        {"percolation", cmd_percolation},
        {"counterexample", cmd_counterexample},
        {"separation-scan", cmd_separation_scan},
        {"lemma-scaling", cmd_lemma_scaling},
    };
    auto it = table.find(name);
    if (it == table.end()) throw invalid_input("unknown command '" + name + "'");
    return it->second(c);
}

// Structured error document for stderr: one JSON object on one line.
inline std::string error_json(const std::string& kind, const std::string& message,
                              const cap_exceeded* cap = nullptr) {
    json j{{"error", kind}, {"message", message}};
    if (cap) {
        j["requested"] = cap->requested();
        j["cap"] = cap->cap();
    }
    return j.dump();
}

// Runs a command and maps exceptions to exit codes and a structured error.
inline CommandResult run_guarded(const std::string& name, const ExperimentConfig& c, std::string& error) {
    try {
        return run_command(name, c);
    } catch (const cap_exceeded& e) {
        error = error_json("cap_exceeded", e.what(), &e);
        return {exit_cap, {}, {}, {}};
    } catch (const invalid_input& e) {
        error = error_json("invalid_input", e.what());
        return {exit_invalid, {}, {}, {}};
    } catch (const std::exception& e) {
        error = error_json("internal", e.what());
        return {exit_error, {}, {}, {}};
    }
}

} // namespace kakeya::lab
