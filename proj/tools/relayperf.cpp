// relayperf: figure sweeps and self-checks for dual-hop fixed-gain relaying
// over generalized-gamma fading.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relayperf/relayperf.hpp"

namespace {

enum Exit { ok = 0, validation_failed = 1, config_failed = 2, numerical_failed = 3 };

struct Args {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
    double perturb = 1.0;
};

void add_common(CLI::App* cmd, Args& a, bool config_required) {
    auto* c = cmd->add_option("--config", a.config, "scenario file (key = value lines)");
    if (config_required) c->required();
    cmd->add_option("--set", a.sets, "override a scenario key, e.g. --set hop1.m=3")->allow_extra_args(false);
    cmd->add_option("--seed", a.seed, "Monte Carlo seed, overrides sim.seed");
    // test hook: scales the Meijer-G prefactors of the closed forms
    cmd->add_option("--perturb-prefactor", a.perturb)->group("");
}

relayperf::ScenarioConfig scenario(const Args& a) {
    relayperf::ScenarioConfig cfg;
    if (!a.config.empty()) cfg = relayperf::load_scenario(a.config);
    for (const auto& s : a.sets) relayperf::apply_override(cfg, s);
    if (a.seed) cfg.seed = *a.seed;
    return cfg;
}

int run_sweep(const std::string& name, const Args& a) {
    const auto cfg = scenario(a);
    relayperf::CommandOptions opt;
    opt.closed.prefactor_scale = a.perturb;
    const auto rep = relayperf::run_command(name, cfg, opt);
    if (a.out.empty()) {
        relayperf::write_csv(std::cout, rep.table);
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw relayperf::config_error(a.out + ": cannot open output file");
        relayperf::write_csv(f, rep.table);
        if (!f) throw relayperf::config_error(a.out + ": write failed");
    }
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
    return rep.exit_code();
}

int run_validate(const Args& a) {
    relayperf::ValidationOptions opt;
    opt.closed.prefactor_scale = a.perturb;
    if (!a.config.empty() || !a.sets.empty() || a.seed) {
        const auto cfg = scenario(a);
        opt.sim.seed = cfg.seed;
        opt.sim.threads = cfg.threads;
    }
    const auto results = relayperf::run_validation(opt);
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw relayperf::config_error(a.out + ": cannot open output file");
        relayperf::print_validation(f, results);
    }
    return relayperf::print_validation(std::cout, results) ? validation_failed : ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Performance of dual-hop fixed-gain relaying over generalized-gamma fading"};
    app.require_subcommand(1);
    Args args;
    const std::vector<std::pair<std::string, std::string>> sweeps = {
        {"gain-sweep", "relay constant C, closed form and quadrature"},
        {"avg-snr", "mean end-to-end SNR: closed form, quadrature, Monte Carlo"},
        {"abep", "bit error probability: Pade MGF and Monte Carlo"},
        {"outage", "outage probability: Pade, Gauss-Laguerre, exact, Monte Carlo"},
    };
    for (const auto& [name, help] : sweeps) {
        auto* cmd = app.add_subcommand(name, help);
        add_common(cmd, args, true);
        cmd->add_option("--out", args.out, "CSV output path (default stdout)");
    }
    auto* val = app.add_subcommand("validate", "run the self-check suite");
    add_common(val, args, false);
    val->add_option("--out", args.out, "also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_failed;
    }
    try {
        for (auto* cmd : app.get_subcommands()) {
            if (cmd->get_name() == "validate") return run_validate(args);
            return run_sweep(cmd->get_name(), args);
        }
    } catch (const relayperf::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_failed;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failed;
    }
    return ok;
}
