#include "doctest.h"

#include <cstdlib>
#include <filesystem>

#include "ergo/config.hpp"
#include "ergo/csv.hpp"
#include "ergo/experiments.hpp"

using namespace ergo;
namespace fs = std::filesystem;

TEST_CASE("minimal config applies the documented defaults") {
    RunConfig cfg = parse_config("[experiment]\nkind = check\n");
    CHECK(cfg.experiment == ExperimentKind::Check);
    CHECK(cfg.n_modes == 64);
    CHECK(cfg.n_colloc == 256);  // 4N
    CHECK(cfg.dt == 1e-3);
    CHECK(cfg.length == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(cfg.drift_coeffs == std::vector<double>{0.0, 0.0, 0.0, -1.0});
    CHECK(cfg.covariance == "identity");
}

TEST_CASE("config rejections name the offending key") {
    CHECK_THROWS_WITH_AS(parse_config("[model]\nwibble = 3\n"),
                         doctest::Contains("unknown key 'wibble'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_config("[experiment]\nkind = check\nwindow_a = 0.4\nwindow_b = 0.6\n"),
        doctest::Contains("check_powerlaw_window"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("[model]\nn_modes = 8\nn_colloc = 9\n"),
                         doctest::Contains("n_colloc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[model]\ncovariance = wavelet\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("stray = 1\n"), std::invalid_argument);
}

TEST_CASE("record_times shorthand start:step:stop") {
    RunConfig cfg = parse_config("[sim]\nrecord_times = 0:0.5:2\nt_end = 2\n");
    CHECK(cfg.record_times == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
}

TEST_CASE("canonical round trip") {
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Moments;
    cfg.n_modes = 16;
    cfg.n_colloc = 64;
    cfg.magnitudes = {0.0, 3.0};
    cfg.seed = 99;
    const std::string text = emit_config(cfg);
    RunConfig back = parse_config(text);
    CHECK(back == cfg);
    CHECK(emit_config(back) == text);
}

TEST_CASE("projection parsing") {
    RunConfig cfg;
    cfg.projection = "sup";
    CHECK(cfg.to_observable().mode == 0);
    cfg.projection = "mode3";
    CHECK(cfg.to_observable().mode == 3);
    cfg.projection = "mode99";
    CHECK_THROWS_AS(cfg.to_observable(), std::invalid_argument);
    cfg.projection = "banana";
    CHECK_THROWS_AS(cfg.to_observable(), std::invalid_argument);
}

namespace {

RunConfig small_moments_config(const std::string& out) {
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Moments;
    cfg.n_modes = 8;
    cfg.n_colloc = 32;
    cfg.dt = 1e-2;
    cfg.t_end = 2.0;
    cfg.record_times = {0.0, 1.0, 2.0};
    cfg.n_traj = 40;
    cfg.magnitudes = {0.0, 5.0};
    cfg.seed = 321;
    cfg.output_dir = out;
    return cfg;
}

} // namespace

TEST_CASE("experiment reruns are byte-identical and thread-count independent") {
    const fs::path base = fs::temp_directory_path() / "ergolab_test_determinism";
    fs::remove_all(base);

    setenv("ERGOLAB_THREADS", "1", 1);
    RunOutcome a = run_experiment(small_moments_config((base / "a").string()));
    setenv("ERGOLAB_THREADS", "3", 1);
    RunOutcome b = run_experiment(small_moments_config((base / "b").string()));
    unsetenv("ERGOLAB_THREADS");
    REQUIRE(a.ok);
    REQUIRE(b.ok);

    for (const auto& name : a.outputs) {
        const std::string fa = read_file((base / "a" / name).string());
        const std::string fb = read_file((base / "b" / name).string());
        CHECK(fa == fb);
    }
    CHECK(read_file((base / "a" / "manifest.json").string()) ==
          read_file((base / "b" / "manifest.json").string()));
    fs::remove_all(base);
}

TEST_CASE("check experiment writes a machine-readable verdict summary") {
    const fs::path base = fs::temp_directory_path() / "ergolab_test_check";
    fs::remove_all(base);
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Check;
    cfg.output_dir = (base / "out").string();
    RunOutcome out = run_experiment(cfg);
    CHECK(out.ok);
    const auto doc = nlohmann::json::parse(read_file((base / "out" / "check_summary.json").string()));
    CHECK(doc.contains("check_drift_dissipativity"));
    CHECK(doc["check_drift_dissipativity"]["passed"].get<bool>());
    CHECK(doc["check_drift_dissipativity"].contains("margin"));
    const auto manifest = nlohmann::json::parse(read_file((base / "out" / "manifest.json").string()));
    CHECK(manifest["ok"].get<bool>());
    CHECK(manifest.contains("config"));
    fs::remove_all(base);
}

TEST_CASE("doeblin experiment: constants plus exact chain self-check") {
    const fs::path base = fs::temp_directory_path() / "ergolab_test_doeblin";
    fs::remove_all(base);
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Doeblin;
    cfg.doeblin_t_steps = 5.0;
    cfg.doeblin_m0 = 0.5;
    cfg.output_dir = (base / "out").string();
    RunOutcome out = run_experiment(cfg);
    CHECK(out.ok);
    CHECK(out.summary["C"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(out.summary["gamma_rate"].get<double>() ==
          doctest::Approx(0.13862943611198905).epsilon(1e-15));
    CHECK(out.summary["chain_check"]["max_violation"].get<double>() <= 1e-12);
    fs::remove_all(base);
}

TEST_CASE("report bundles prior summaries") {
    const fs::path base = fs::temp_directory_path() / "ergolab_test_report";
    fs::remove_all(base);
    RunConfig cfg;
    cfg.experiment = ExperimentKind::Doeblin;
    cfg.output_dir = (base / "out").string();
    REQUIRE(run_experiment(cfg).ok);
    cfg.experiment = ExperimentKind::Report;
    RunOutcome rep = run_experiment(cfg);
    CHECK(rep.ok);
    CHECK(rep.summary["bundled"].contains("doeblin_summary.json"));
    fs::remove_all(base);
}
