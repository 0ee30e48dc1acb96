// cavent: point evaluation, parameter sweeps and oracle validation

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cavent/entanglement.hpp"
#include "cavent/sweep.hpp"
#include "cavent/units.hpp"
#include "cavent/validation.hpp"

using namespace cavent;

namespace {

RunConfig build_config(const std::string& path, const std::vector<std::string>& sets)
{
    RunConfig c = path.empty() ? RunConfig{} : load_config(path);
    for (auto& kv : sets) apply_override(c, kv);
    return finalize(c);
}

int run_point(const RunConfig& c)
{
    const PointResult r = entropy_at(c);
    std::printf("S=%.17g born_ratio=%.17g\n", r.S, r.born_ratio);
    return 0;
}

int run_sweep_cmd(const RunConfig& c, const std::string& name, const std::string& out, int workers, int count)
{
    const SweepSpec spec = preset(name, c, count);
    const SweepResult res = run_sweep(spec, workers);
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "cannot write %s\n", out.c_str());
        return 1;
    }
    write_csv(res, f);
    long errors = 0;
    for (auto& r : res.rows) errors += !r.error.empty();
    std::fprintf(stderr, "%s: %zu rows, %ld failed, %.2f s\n", out.c_str(), res.rows.size(), errors, res.wall_time_s);
    return 0;
}

int run_validate(unsigned long seed, KernelConvention conv)
{
    using namespace validation;
    std::vector<SuiteResult> suites;
    suites.push_back(root_consistency(seed, 10000, conv));
    suites.push_back(finite_difference(seed + 1));
    suites.push_back(kronecker(seed + 2));
    suites.push_back(quadrature_exactness());
    const auto sm = smeared_delta(conv);
    bool ok = true;
    for (auto& s : suites) {
        std::printf("[%s] %s: %s\n", s.passed ? "PASS" : "FAIL", s.name.c_str(), s.detail.c_str());
        ok = ok && s.passed;
    }
    std::printf("[%s] %s: %s\n", sm.summary.passed ? "PASS" : "FAIL", sm.summary.name.c_str(), sm.summary.detail.c_str());
    for (auto& l : sm.lines) std::printf("    %s\n", l.c_str());
    ok = ok && sm.summary.passed;
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cavity-mediated pseudospin entanglement of two Dirac quasiparticles"};
    app.require_subcommand(1, 1);

    std::string config_path, preset_name, out_path;
    std::vector<std::string> sets;
    int workers = 1, count = 0;
    unsigned long seed = 20240611;

    auto* point = app.add_subcommand("point", "evaluate S and the Born ratio at one configuration");
    point->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    point->add_option("--set", sets, "override key=value (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "run a preset sweep and write CSV");
    sweep->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    sweep->add_option("--preset", preset_name, "preset name (see `presets`)")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--set", sets, "override key=value (repeatable)");
    sweep->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--count", count, "points per axis (default 64 for 2 axes, 256 for 1)")
        ->check(CLI::Range(2, 100000));

    auto* val = app.add_subcommand("validate", "run the oracle suites");
    val->add_option("--seed", seed, "seed for the random draws");
    val->add_option("--set", sets, "override key=value (only kernel_convention is used)");

    auto* pre = app.add_subcommand("presets", "list sweep presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*pre) {
            for (auto& n : preset_names()) std::printf("%-12s %s\n", n.c_str(), preset_description(n).c_str());
            return 0;
        }
        const RunConfig cfg = build_config(config_path, sets);
        if (*point) return run_point(cfg);
        if (*sweep) return run_sweep_cmd(cfg, preset_name, out_path, workers, count);
        if (*val) return run_validate(seed, cfg.convention);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
