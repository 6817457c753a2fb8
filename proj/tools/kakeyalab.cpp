// SPDX-License-Identifier: Apache-2.0
//
// kakeyalab: batch experiments on sticky Kakeya sets over dyadic direction
// trees. One subcommand per experiment; settings come from an optional
// key=value config file, then from flags.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kakeya/lab/commands.hpp"

namespace {

using kakeya::lab::ExperimentConfig;

// Flag values are kept as strings and routed through apply_setting so the
// config file and the command line share one parser.
struct FlagValues {
    std::string config_file;
    std::map<std::string, std::string> values;
    bool check = false;
};

void add_flags(CLI::App& sub, FlagValues& fv) {
    static const std::pair<const char*, const char*> keys[] = {
        {"family", "direction family: quarter_cantor, theorem2, section5"},
        {"N", "family parameter (largest N for scans)"},
        {"N-min", "smallest N for lemma-scaling"},
        {"depth", "tree depth override"},
        {"order", "prune to this lacunary order"},
        {"directions", "explicit comma-separated dyadic slopes, overrides family"},
        {"eta", "separation parameter, a power of two"},
        {"samples", "Monte Carlo samples"},
        {"count", "number of sampled sticky maps"},
        {"seed", "base seed"},
        {"strip", "x0,x1"},
        {"point", "x,y"},
        {"grid", "grid points per axis, a power of two"},
        {"out", "output directory"},
        {"cap-enum", "enumeration cap"},
        {"cap-depth", "tree depth cap"},
        {"threads", "worker threads"},
    };
    sub.add_option("--config", fv.config_file, "key=value config file")->check(CLI::ExistingFile);
    for (const auto& [k, help] : keys) {
        auto* opt = sub.add_option_function<std::string>(
            std::string("--") + k, [&fv, key = std::string(k)](const std::string& v) { fv.values[key] = v; }, help);
        opt->type_name("VALUE");
    }
    sub.add_flag("--check", fv.check, "enforce acceptance thresholds; exit 4 on violation");
}

ExperimentConfig build_config(const FlagValues& fv) {
    ExperimentConfig c;
    if (!fv.config_file.empty()) kakeya::lab::read_config_file(c, fv.config_file);
    for (const auto& [k, v] : fv.values) kakeya::lab::apply_setting(c, k, v);
    if (fv.check) c.check = true;
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kakeyalab: sticky Kakeya set experiments"};
    app.require_subcommand(1);
    FlagValues fv;
    static const std::map<std::string, std::string> descriptions{
        {"tree-info", "lacunary value, splitting report and separation of a direction tree"},
        {"prune", "prune a direction tree to a given order"},
        {"ksigma", "sample sticky maps, render K_sigma as SVG"},
        {"measure", "exact and Monte Carlo strip measures of sampled K_sigma"},
        {"prob", "membership probabilities over a point grid"},
        {"gtree", "cover tree and percolation survival at a point"},
        {"percolation", "survival table of full binary trees at p = 1/2"},
        {"counterexample", "verify the non-separated counterexample point"},
        {"separation-scan", "best separation per lacunary order"},
        {"lemma-scaling", "strip measure statistics across N"},
    };
    for (const auto& name : kakeya::lab::command_names()) add_flags(*app.add_subcommand(name, descriptions.at(name)), fv);

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    ExperimentConfig cfg;
    try {
        cfg = build_config(fv);
    } catch (const kakeya::invalid_input& e) {
        std::cerr << kakeya::lab::error_json("invalid_input", e.what()) << '\n';
        return kakeya::lab::exit_invalid;
    }

    std::string error;
    const auto r = kakeya::lab::run_guarded(name, cfg, error);
    if (!error.empty()) {
        std::cerr << error << '\n';
        return r.exit_code;
    }
    for (const auto& l : r.lines) std::cout << l << '\n';
    std::cout << "config hash " << cfg.hash(name) << ", " << r.artifacts.size() << " artifacts in " << cfg.out << '\n';
    if (r.exit_code == kakeya::lab::exit_check) {
        for (const auto& f : r.failures)
            std::cerr << kakeya::lab::error_json("check_failed", f) << '\n';
    }
    return r.exit_code;
}
