#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msm/msm.hpp"

namespace {

const char* comparator(msm::ClaimKind kind) {
    switch (kind) {
    case msm::ClaimKind::AbsDiff:
        return "abs";
    case msm::ClaimKind::UpperBound:
        return "le";
    default:
        return "ge";
    }
}

void print_report(const msm::RunReport& report, const std::string& out_dir) {
    for (const auto& rec : report.records) {
        std::printf("eps=%-8g (%.2fs)\n", rec.eps, rec.wall_seconds);
        for (const auto& c : rec.claims)
            std::printf("  [%s] %-32s %s value=%.10g target=%.10g tol=%.3g\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), comparator(c.kind), c.value,
                        c.target, c.tolerance);
        for (const auto& [key, value] : rec.info)
            std::printf("         %-32s value=%.10g\n", key.c_str(), value);
    }
    std::printf("%s: %zu record(s), artifacts in %s -> %s\n", report.scenario.c_str(),
                report.records.size(), out_dir.c_str(),
                report.all_passed() ? "PASS" : "FAIL");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple-scales experiment harness"};
    app.get_formatter()->column_width(28);

    std::string scenario;
    std::string config_path;
    std::vector<double> eps;
    std::string out_dir;
    unsigned seed = 0;
    double tol = 0.0;
    std::size_t grid_n = 0;

    app.add_option("scenario", scenario, "one of: roots-table, euler-figure, damped-table, "
                                         "duffing-figures, kg-packet, fourth-order-packet, "
                                         "phase-matched-pair, maxwell-te, bench-speedup")
        ->required();
    auto* opt_config = app.add_option("--config", config_path, "JSON config file");
    auto* opt_eps =
        app.add_option("--eps", eps, "perturbation strengths in (0, 0.5]; overrides the config");
    auto* opt_out = app.add_option("--out", out_dir, "output directory for CSV and report.json");
    auto* opt_seed = app.add_option("--seed", seed, "seed for sampled property checks");
    auto* opt_tol = app.add_option("--tol", tol, "accuracy target for packet and bench runs");
    auto* opt_grid = app.add_option("--grid-n", grid_n, "reference grid override, power of two");

    CLI11_PARSE(app, argc, argv);

    try {
        msm::ExperimentConfig cfg;
        if (opt_config->count())
            cfg = msm::load_config(config_path);
        cfg.scenario = scenario;
        if (opt_eps->count())
            cfg.eps = eps;
        if (opt_out->count())
            cfg.out_dir = out_dir;
        if (opt_seed->count())
            cfg.seed = seed;
        if (opt_tol->count())
            cfg.tol = tol;
        if (opt_grid->count())
            cfg.grid_n = grid_n;

        const auto report = msm::run_scenario(cfg);
        print_report(report, msm::resolved_out_dir(cfg));
        return report.all_passed() ? 0 : 1;
    } catch (const msm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
