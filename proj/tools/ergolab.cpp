// Command-line front end: one experiment per invocation, everything
// reproducible from the config file plus the seed.

#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "ergo/config.hpp"
#include "ergo/csv.hpp"
#include "ergo/experiments.hpp"

namespace {

void print_check_table(const nlohmann::json& summary) {
    std::printf("%-34s %-28s %6s %12s\n", "hypothesis", "checker", "result", "margin");
    for (auto it = summary.begin(); it != summary.end(); ++it) {
        const auto& v = it.value();
        std::printf("%-34s %-28s %6s %12.4g\n",
                    v.value("hypothesis", std::string("-")).c_str(), it.key().c_str(),
                    v.value("passed", false) ? "pass" : "FAIL", v.value("margin", 0.0));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergolab: spectral-Galerkin simulator and ergodicity laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::int64_t seed_override = -1;

    const char* kinds[] = {"check", "simulate", "moments", "tv", "uniformity",
                           "minorize", "gap", "doeblin", "report"};
    for (const char* kind : kinds) {
        auto* sub = app.add_subcommand(kind);
        sub->add_option("--config", config_path, "config file (key = value sections)");
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--out", out_dir, "output directory");
    }

    CLI11_PARSE(app, argc, argv);

    ergo::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            cfg = ergo::parse_config(ergo::read_file(config_path));
        }
        cfg.experiment = ergo::experiment_from_string(app.get_subcommands().front()->get_name());
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 2;
    }

    const ergo::RunOutcome outcome = ergo::run_experiment(cfg);
    if (cfg.experiment == ergo::ExperimentKind::Check && !outcome.summary.empty()) {
        print_check_table(outcome.summary);
    }
    for (const auto& f : outcome.outputs) {
        std::printf("wrote %s/%s\n", cfg.output_dir.c_str(), f.c_str());
    }
    if (!outcome.error.empty()) std::fprintf(stderr, "error: %s\n", outcome.error.c_str());
    std::printf("%s: %s\n", ergo::to_string(cfg.experiment), outcome.ok ? "ok" : "FAILED");
    return outcome.ok ? 0 : 1;
}
