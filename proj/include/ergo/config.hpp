#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ergo/estimators.hpp"
#include "ergo/hypotheses.hpp"
#include "ergo/model.hpp"
#include "ergo/sim.hpp"

namespace ergo {

enum class ExperimentKind { Check, Simulate, Moments, Tv, Uniformity, Minorize, Gap, Doeblin, Report };

const char* to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

/// Everything one invocation needs, with every default materialized so the
/// canonical serialization re-parses to an identical value.
struct RunConfig {
    // [model]
    double length = M_PI;
    int n_modes = 64;
    int n_colloc = 256;  // 4N unless set
    std::vector<double> drift_coeffs = {0.0, 0.0, 0.0, -1.0};
    std::string covariance = "identity";  // identity | power_law | explicit
    double cov_scale = 1.0;
    double cov_exponent = 0.5;
    std::vector<double> cov_values;

    // [sim]
    double dt = 1e-3;
    double t_end = 5.0;
    std::vector<double> record_times;  // empty = 0:0.25:t_end
    std::uint64_t seed = 1;
    bool noise_on = true;
    int n_traj = 500;

    // [experiment]
    ExperimentKind experiment = ExperimentKind::Check;
    std::string output_dir = "out";

    double alpha_exp = 0.25;
    double hs_t = 1.0;
    double epsilon = 2.0;
    double s = 3.0;
    double box = 10.0;
    int grid_steps = 2001;
    double gamma_series = 0.25;
    double e9_t = 1.0;
    int quad_points = 513;
    int d = 1;
    double window_a = -1.0;  // < 0 = unset
    double window_b = -1.0;

    std::vector<double> magnitudes;  // empty = per-experiment default
    double x0_magnitude = 1.0;

    double tv_magnitude = 2.0;
    int bins = 64;
    std::string projection = "mode1";  // modeK or sup
    double fit_t_min = 0.25;
    double fit_t_max = 2.0;

    double eps_level = 0.25;

    std::vector<double> stress_magnitudes;  // empty = {0, 100, 10000}; expanded to ±
    bool stress_rough = true;
    double k_sup_radius = 5.0;
    double k_sobolev_theta = 0.75;
    double k_sobolev_radius = 50.0;
    double t_probe = 2.0;

    double gap_burn_in = -1.0;  // < 0 = pilot-estimated
    double gap_sample_dt = 0.05;
    int gap_n_samples = 20000;

    double doeblin_t_steps = 5.0;
    double doeblin_m0 = 0.5;

    ModelSpec to_model_spec() const;
    SimParams to_sim_params() const;           // resolves the record-time default
    CheckParams to_check_params() const;
    Observable to_observable() const;
    std::vector<double> resolved_magnitudes() const;
    std::vector<double> resolved_stress_magnitudes() const;
};

/// Strict parse of the sectioned key = value format ([model], [sim],
/// [experiment]); unknown keys and invariant violations throw with the
/// offending key named. record_times accepts either an explicit list or the
/// shorthand start:step:stop.
RunConfig parse_config(const std::string& text);

/// Canonical serialization: fixed key order, every value materialized,
/// doubles exact to 17 significant digits. parse(emit(c)) == c.
std::string emit_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

} // namespace ergo
