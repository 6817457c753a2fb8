// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kakeya/lab/commands.hpp"
#include "kakeya/lab/config.hpp"
#include "kakeya/lab/pool.hpp"
#include "kakeya/lab/report.hpp"
#include "kakeya/svg.hpp"

using namespace kakeya;
using namespace kakeya::lab;
namespace fs = std::filesystem;

namespace {

std::shared_ptr<const DirTree> share(DirTree t) { return std::make_shared<const DirTree>(std::move(t)); }

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("kakeya_lab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace

TEST(Svg, OnePolygonPerParallelogram) {
    const KSet k = build_kset(sample(share(DirTree::full(4)), 4, 5));
    SvgStyle st;
    st.comment = "hash 0123";
    const std::string svg = to_svg(k, Dyadic(0), Dyadic(1), st);
    EXPECT_EQ(count_of(svg, "<polygon "), 16U);
    EXPECT_NE(svg.find("<!-- hash 0123 -->"), std::string::npos);
    EXPECT_EQ(svg, to_svg(k, Dyadic(0), Dyadic(1), st));
    EXPECT_THROW(to_svg(k, Dyadic(1), Dyadic(1)), invalid_input);
}

TEST(Svg, IdentityMapCoordinates) {
    // height 0: the single parallelogram with base [0,1] and slope 0
    const KSet k = build_kset(sample(share(DirTree()), 0, 1));
    SvgStyle st;
    st.scale = 100.0;
    const std::string svg = to_svg(k, Dyadic(0), Dyadic(1), st);
    // padding 0.02 on each side of the unit square
    EXPECT_NE(svg.find("points=\"2.000000,102.000000 102.000000,102.000000 102.000000,2.000000 2.000000,2.000000\""),
              std::string::npos)
        << svg;
}

TEST(Csv, QuotingAndLineEnds) {
    CsvTable t({"a", "b"});
    t.add({"plain", "with,comma"});
    t.add({"say \"hi\"", "line\nbreak"});
    EXPECT_EQ(t.str(), "a,b\r\nplain,\"with,comma\"\r\n\"say \"\"hi\"\"\",\"line\nbreak\"\r\n");
    EXPECT_THROW(t.add({"short"}), invalid_input);
}

TEST(Config, CanonicalTextAndHash) {
    ExperimentConfig c;
    const std::string h = c.hash("measure");
    EXPECT_EQ(h.size(), 16U);
    EXPECT_NE(h, c.hash("prob"));

    ExperimentConfig d = c;
    d.out = "elsewhere";
    d.threads = 4;
    EXPECT_EQ(d.hash("measure"), h);
    apply_setting(d, "seed", "2");
    EXPECT_NE(d.hash("measure"), h);
    EXPECT_NE(c.canonical().find("eta=1/2\n"), std::string::npos);
}

TEST(Config, FnvReferenceValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Config, ParsesFileAndRejectsBadValues) {
    ExperimentConfig c;
    std::istringstream is("# comment\nfamily = theorem2\nN=3\nstrip=1,2\npoint = 3/2, 5/4\ncheck=yes\n");
    read_config(c, is);
    EXPECT_EQ(c.family, FamilyKind::theorem2);
    EXPECT_EQ(c.n, 3U);
    ASSERT_TRUE(c.strip);
    EXPECT_EQ(c.strip->x1, Dyadic(2));
    ASSERT_TRUE(c.point);
    EXPECT_EQ(c.point->second, Dyadic(BigInt(5), 2));
    EXPECT_TRUE(c.check);

    EXPECT_THROW(apply_setting(c, "bogus", "1"), invalid_input);
    EXPECT_THROW(apply_setting(c, "N", "-1"), invalid_input);
    EXPECT_THROW(apply_setting(c, "eta", "3/4"), invalid_input);
    EXPECT_THROW(apply_setting(c, "strip", "2,1"), invalid_input);
    std::istringstream bad("no equals sign\n");
    EXPECT_THROW(read_config(c, bad), invalid_input);
}

TEST(Pool, ResultsInIndexOrder) {
    for (unsigned threads : {1U, 3U}) {
        const auto v = run_indexed(50, threads, [](std::size_t i) { return i * i; });
        ASSERT_EQ(v.size(), 50U);
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], i * i);
    }
    EXPECT_THROW(run_indexed(10, 2,
                             [](std::size_t i) -> int {
                                 if (i == 7) throw invalid_input("seven");
                                 return 0;
                             }),
                 invalid_input);
}

TEST(Commands, CounterexampleSummary) {
    ExperimentConfig c;
    c.family = FamilyKind::theorem2;
    c.n = 1;
    c.samples = 500;
    c.out = scratch("counterexample").string();
    const auto r = run_command("counterexample", c);
    EXPECT_EQ(r.exit_code, exit_ok);
    ASSERT_FALSE(r.lines.empty());
    EXPECT_EQ(r.lines.front(), "Pr = 1 (exact), 4/4 maps hit (1, 71/64)");

    const std::string doc = slurp(fs::path(c.out) / "counterexample.json");
    const auto j = json::parse(doc);
    EXPECT_EQ(j.begin().key(), "config_hash");
    EXPECT_EQ(j["config_hash"], c.hash("counterexample"));
    EXPECT_EQ(j["probability"], "1/1");
    EXPECT_EQ(j["maps_hit"], 4);
}

TEST(Commands, TreeInfoLambda) {
    ExperimentConfig c;
    apply_setting(c, "directions", "1/2,1/4,1/8");
    c.depth = 6;
    c.out = scratch("tree_info").string();
    const auto r = run_command("tree-info", c);
    EXPECT_NE(std::find(r.lines.begin(), r.lines.end(), "λ = 2"), r.lines.end());
    const std::string csv = slurp(fs::path(c.out) / "splits.csv");
    EXPECT_EQ(csv.rfind("config_hash,vertex,height,value\r\n" + c.hash("tree-info") + ",0,0,2\r\n", 0), 0U) << csv;
}

TEST(Commands, PercolationGoldenRows) {
    ExperimentConfig c;
    c.n = 3;
    c.check = true;
    c.out = scratch("percolation").string();
    const auto r = run_command("percolation", c);
    EXPECT_EQ(r.exit_code, exit_ok);
    const std::string csv = slurp(fs::path(c.out) / "percolation.csv");
    EXPECT_NE(csv.find(",1,3/4,"), std::string::npos);
    EXPECT_NE(csv.find(",2,39/64,"), std::string::npos);
}

TEST(Commands, CheckModeFailsOnViolation) {
    // one split only: eta_max is unconstrained and misses the 1/2 threshold
    ExperimentConfig c;
    c.family = FamilyKind::quarter_cantor;
    c.n = 1;
    c.check = true;
    c.out = scratch("check").string();
    const auto r = run_command("tree-info", c);
    EXPECT_EQ(r.exit_code, exit_check);
    ASSERT_EQ(r.failures.size(), 1U);
    c.check = false;
    EXPECT_EQ(run_command("tree-info", c).exit_code, exit_ok);
}

TEST(Commands, ErrorsMapToExitCodes) {
    ExperimentConfig c;
    c.out = scratch("errors").string();
    std::string err;
    EXPECT_EQ(run_guarded("nope", c, err).exit_code, exit_invalid);
    EXPECT_NE(err.find("\"error\":\"invalid_input\""), std::string::npos);

    err.clear();
    c.depth = 40;
    c.cap_depth = 10;
    EXPECT_EQ(run_guarded("tree-info", c, err).exit_code, exit_cap);
    EXPECT_NE(err.find("\"cap\":10"), std::string::npos) << err;

    err.clear();
    c = ExperimentConfig{};
    c.out = scratch("errors2").string();
    EXPECT_EQ(run_guarded("gtree", c, err).exit_code, exit_invalid);
}

TEST(Commands, RepeatedRunsAreByteIdentical) {
    ExperimentConfig c;
    c.order = 2;
    c.count = 2;
    c.samples = 2000;
    c.grid = 2;
    for (const char* cmd : {"ksigma", "measure", "prob"}) {
        c.out = scratch(std::string(cmd) + "_a").string();
        const auto a = run_command(cmd, c);
        c.out = scratch(std::string(cmd) + "_b").string();
        c.threads = 2;
        const auto b = run_command(cmd, c);
        c.threads = 1;
        ASSERT_EQ(a.artifacts.size(), b.artifacts.size());
        for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
            EXPECT_EQ(fs::path(a.artifacts[i]).filename(), fs::path(b.artifacts[i]).filename());
            EXPECT_EQ(slurp(a.artifacts[i]), slurp(b.artifacts[i])) << a.artifacts[i];
        }
    }
}

TEST(Commands, SvgCarriesConfigHash) {
    ExperimentConfig c;
    c.order = 2;
    c.out = scratch("ksigma_hash").string();
    run_command("ksigma", c);
    const std::string svg = slurp(fs::path(c.out) / "sigma_0.svg");
    EXPECT_NE(svg.find("config_hash " + c.hash("ksigma")), std::string::npos);
    EXPECT_EQ(count_of(svg, "<polygon "), 16U);
}
