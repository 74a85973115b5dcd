// Command-line driver: run, sweep and compare.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nomacomp/config.hpp"
#include "nomacomp/errors.hpp"
#include "nomacomp/output.hpp"
#include "nomacomp/simulation.hpp"

namespace {

using namespace nomacomp;

constexpr int kConfigExit = 2;
constexpr int kIoExit = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> rrhs;
    std::optional<int> ttis;
    int runs = 1;
    std::string out = "out";
    std::string emit = "summary";
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "JSON scenario file; absent keys keep their defaults");
    sub->add_option("--seed", f.seed, "Base seed; run r uses seed + r");
    sub->add_option("--rrhs", f.rrhs, "Number of RRHs");
    sub->add_option("--ttis", f.ttis, "TTIs per run");
    sub->add_option("--runs", f.runs, "Seeds per scheme or sweep point")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--emit", f.emit, "summary, per-tti or both");
}

ScenarioConfig resolve(const CommonFlags& f) {
    ScenarioConfig c = f.config_path.empty() ? ScenarioConfig{} : load_config(f.config_path);
    if (f.seed) c.seed = *f.seed;
    if (f.rrhs) c.rrh_count = *f.rrhs;
    if (f.ttis) c.ttis = *f.ttis;
    c.validate();
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_schemes(const std::string& command, const CommonFlags& f, ScenarioConfig cfg,
                 const std::vector<Scheme>& schemes) {
    const auto t0 = std::chrono::steady_clock::now();
    OutputWriter out(f.out, parse_emit(f.emit));
    if (schemes.size() == 1) cfg.scheme = schemes.front();
    out.write_config(cfg);
    for (int r = 0; r < f.runs; ++r) {
        for (const Scheme s : schemes) {
            ScenarioConfig c = cfg;
            c.scheme = s;
            c.seed = cfg.seed + static_cast<std::uint64_t>(r);
            SimulationOptions opts;
            if (out.wants_per_tti()) {
                opts.on_tti = [&out, &c](const TtiReport& rep) { out.write_tti(c.scheme, c.seed, rep); };
            }
            const RunResult res = run_simulation(c, opts);
            out.add_run(res.summary);
            std::cerr << to_string(s) << " seed " << c.seed << ": edge " << res.summary.mean_edge_throughput_bps
                      << " bps, non-edge " << res.summary.mean_nonedge_throughput_bps << " bps, avg coalition "
                      << res.summary.avg_coalition_size << '\n';
        }
    }
    out.close();
    out.write_manifest(RunManifest{command, config_hash(cfg), cfg.seed, f.runs, schemes, seconds_since(t0)});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downlink C-RAN simulator with NOMA, ZF MU-MIMO and JT-CoMP clustering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));

    CommonFlags run_flags;
    std::string run_scheme;
    CLI::App* run = app.add_subcommand("run", "Run one scheme");
    add_common(run, run_flags);
    run->add_option("--scheme", run_scheme, "no_comp, sc_jt_comp, gc_jt_comp or game_jt_comp");

    CommonFlags cmp_flags;
    std::vector<std::string> cmp_schemes;
    CLI::App* compare = app.add_subcommand("compare", "Run several schemes on identical random streams");
    add_common(compare, cmp_flags);
    compare->add_option("--scheme", cmp_schemes, "Scheme to include (repeatable; default all four)");

    CommonFlags sweep_flags;
    std::string sweep_scheme;
    std::string axis;
    std::vector<double> values;
    CLI::App* sw = app.add_subcommand("sweep", "Average metrics over a numeric config field");
    add_common(sw, sweep_flags);
    sw->add_option("--scheme", sweep_scheme, "Scheme to sweep");
    sw->add_option("--axis", axis, "Numeric config field, e.g. d_f or rrh_count")->required();
    sw->add_option("--values", values, "Values of the axis")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigExit;
    }

    try {
        if (*run) {
            ScenarioConfig cfg = resolve(run_flags);
            if (!run_scheme.empty()) cfg.scheme = parse_scheme(run_scheme);
            run_schemes("run", run_flags, cfg, {cfg.scheme});
        } else if (*compare) {
            const ScenarioConfig cfg = resolve(cmp_flags);
            std::vector<Scheme> schemes;
            for (const std::string& s : cmp_schemes) schemes.push_back(parse_scheme(s));
            if (schemes.empty()) {
                schemes = {Scheme::no_comp, Scheme::sc_jt_comp, Scheme::gc_jt_comp, Scheme::game_jt_comp};
            }
            if (schemes.size() < 2) {
                throw ConfigError("compare needs at least two schemes");
            }
            run_schemes("compare", cmp_flags, cfg, schemes);
        } else {
            const auto t0 = std::chrono::steady_clock::now();
            ScenarioConfig cfg = resolve(sweep_flags);
            if (!sweep_scheme.empty()) cfg.scheme = parse_scheme(sweep_scheme);
            OutputWriter out(sweep_flags.out, parse_emit(sweep_flags.emit));
            const std::vector<SweepRow> rows = sweep(cfg, axis, values, sweep_flags.runs);
            out.write_config(cfg);
            out.write_sweep(rows);
            out.write_manifest(
                RunManifest{"sweep " + axis, config_hash(cfg), cfg.seed, sweep_flags.runs, {cfg.scheme},
                            seconds_since(t0)});
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigExit;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIoExit;
    }
    return 0;
}
