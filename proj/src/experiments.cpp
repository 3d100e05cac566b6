#include "ergo/experiments.hpp"

#include <cmath>
#include <filesystem>

#include "ergo/csv.hpp"
#include "ergo/doeblin.hpp"
#include "ergo/estimators.hpp"
#include "ergo/ode.hpp"
#include "ergo/rng.hpp"

namespace ergo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json verdict_json(const Verdict& v) {
    json j;
    j["passed"] = v.passed;
    j["margin"] = v.margin;
    json w = json::object();
    for (const auto& [k, val] : v.witness) w[k] = val;
    j["witness"] = w;
    if (v.counterexample) j["counterexample"] = *v.counterexample;
    j["detail"] = v.detail;
    return j;
}

json fit_json(const DecayFit& f) {
    return json{{"amplitude", f.amplitude}, {"gamma_rate", f.gamma_rate}, {"r2", f.r2},
                {"t_min", f.t_min},         {"t_max", f.t_max},           {"n_points", f.n_points}};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

SpectralField scaled_e1(const RunConfig& cfg, double magnitude) {
    return SpectralField::single_mode(static_cast<std::size_t>(cfg.n_modes), 1, magnitude);
}

/// A deliberately rough field (alternating signs, slow decay) scaled to the
/// requested sup-norm; exercises the sobolev side of the compact set.
SpectralField rough_field(const ModelSpec& spec, double sup_target) {
    SpectralField f(static_cast<std::size_t>(spec.n_modes()));
    for (int n = 1; n <= spec.n_modes(); ++n) {
        f.coeffs[static_cast<std::size_t>(n - 1)] =
            ((n % 2 == 0) ? -1.0 : 1.0) / std::sqrt(static_cast<double>(n));
    }
    const double s = spec.sup_norm(f);
    if (s > 0.0 && sup_target > 0.0) {
        for (double& c : f.coeffs) c *= sup_target / s;
    }
    return f;
}

// ----- per-experiment runners ------------------------------------------------

RunOutcome run_check(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const HypothesisReport report = check_all(spec, cfg.to_check_params());

    json summary = json::object();
    for (const auto& e : report.entries) {
        json j = verdict_json(e.verdict);
        j["hypothesis"] = e.hypothesis;
        summary[e.checker] = j;
    }
    write_file(out_path(cfg, "check_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("check_summary.json");
    out.summary = summary;
    out.ok = report.all_passed();
    if (!out.ok) out.error = "one or more hypothesis checks failed";
    return out;
}

RunOutcome run_simulate(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const SimParams params = cfg.to_sim_params();
    const auto ens = run_ensemble(spec, params, {scaled_e1(cfg, cfg.x0_magnitude)}, cfg.n_traj);

    write_snapshot_csv(out_path(cfg, "snapshots.csv"), ens[0]);
    out.outputs.push_back("snapshots.csv");

    json summary;
    summary["n_traj"] = cfg.n_traj;
    summary["blowups"] = ens[0].n_blowups();
    summary["blowup_fraction"] = ens[0].blowup_fraction();
    summary["first_traj_seed"] = ens[0].traj_seeds.front();
    write_file(out_path(cfg, "simulate_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("simulate_summary.json");
    out.summary = summary;
    out.ok = ens[0].n_blowups() == 0;
    if (!out.ok) out.error = "trajectories blew up";
    return out;
}

// Mean sup-norm curve of the pure stochastic convolution (zero-drift model),
// plus the mean of ||Z||^s needed for the uniform-bound composition.
struct ZReference {
    std::vector<double> times;
    std::vector<double> mean_sup;
    std::vector<double> mean_sup_pow_s;
    std::vector<double> std_err;
};

ZReference z_reference(const RunConfig& cfg, const SimParams& params, int n_traj) {
    RunConfig zc = cfg;
    zc.drift_coeffs = {0.0};
    const ModelSpec zspec = zc.to_model_spec();
    const auto ens = run_ensemble(zspec, params, {SpectralField(static_cast<std::size_t>(cfg.n_modes))},
                                  n_traj);
    ZReference ref;
    ref.times = ens[0].times;
    for (std::size_t t = 0; t < ens[0].times.size(); ++t) {
        double sum = 0.0, sumsq = 0.0, sump = 0.0;
        for (const auto& f : ens[0].snaps[t]) {
            const double s = zspec.sup_norm(f);
            sum += s;
            sumsq += s * s;
            sump += std::pow(s, cfg.s);
        }
        const double n = static_cast<double>(ens[0].snaps[t].size());
        ref.mean_sup.push_back(sum / n);
        ref.mean_sup_pow_s.push_back(sump / n);
        const double var = std::max(0.0, sumsq / n - (sum / n) * (sum / n));
        ref.std_err.push_back(std::sqrt(var / (n - 1.0)));
    }
    return ref;
}

RunOutcome run_moments(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const SimParams params = cfg.to_sim_params();
    const auto mags = cfg.resolved_magnitudes();

    // Certified dissipativity constants feed the uniform bound.
    const Verdict diss =
        check_drift_dissipativity(spec.drift(), cfg.epsilon, cfg.s, cfg.box, cfg.grid_steps);

    std::vector<SpectralField> x0s;
    for (double m : mags) x0s.push_back(scaled_e1(cfg, m));
    const auto ens = run_ensemble(spec, params, x0s, cfg.n_traj);

    int blowups = 0;
    double overall_max = 0.0, max_se = 0.0;
    json curves = json::array();
    for (std::size_t k = 0; k < mags.size(); ++k) {
        const auto curve = moment_curve(ens[k], spec);
        std::vector<std::vector<double>> rows;
        for (const auto& p : curve) {
            rows.push_back({p.t, p.mean_sup, p.std_err, static_cast<double>(p.n)});
            if (p.t >= 1.0) {
                overall_max = std::max(overall_max, p.mean_sup);
                max_se = std::max(max_se, p.std_err);
            }
        }
        const std::string name = "moments_mag" + std::to_string(k) + ".csv";
        write_csv(out_path(cfg, name), {"t", "mean_sup", "std_err", "n"}, rows);
        out.outputs.push_back(name);
        blowups += ens[k].n_blowups();
        curves.push_back({{"magnitude", mags[k]}, {"file", name}});
    }

    json summary;
    summary["curves"] = curves;
    summary["dissipativity"] = verdict_json(diss);
    summary["max_mean_sup_from_t1"] = overall_max;
    bool bound_ok = false;
    if (diss.passed) {
        double c1 = 0.0, c2 = 0.0, c3 = 0.0;
        for (const auto& [k, v] : diss.witness) {
            if (k == "c1") c1 = v;
            if (k == "c2") c2 = v;
            if (k == "c3") c3 = v;
        }
        const ZReference zref = z_reference(cfg, params, cfg.n_traj);
        {
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < zref.times.size(); ++i)
                rows.push_back({zref.times[i], zref.mean_sup[i], zref.std_err[i]});
            write_csv(out_path(cfg, "z_reference.csv"), {"t", "mean_sup", "std_err"}, rows);
            out.outputs.push_back("z_reference.csv");
        }
        double z_sup = 0.0, z_pow = 0.0;
        for (std::size_t i = 0; i < zref.times.size(); ++i) {
            z_sup = std::max(z_sup, zref.mean_sup[i]);
            z_pow = std::max(z_pow, zref.mean_sup_pow_s[i]);
        }
        const double c_hat = c2 * z_pow + c3;
        const double bound = bound_2_26(c1, cfg.epsilon, c_hat) + z_sup + 3.0 * max_se;
        bound_ok = overall_max <= bound;
        summary["c_hat"] = c_hat;
        summary["z_mean_sup_max"] = z_sup;
        summary["bound_2_26"] = bound_2_26(c1, cfg.epsilon, c_hat);
        summary["uniform_bound"] = bound;
        summary["bound_satisfied"] = bound_ok;
    } else {
        summary["bound_satisfied"] = false;
        summary["note"] = "dissipativity check failed: no certified constants for the bound";
    }
    summary["blowups"] = blowups;
    write_file(out_path(cfg, "moments_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("moments_summary.json");
    out.summary = summary;
    out.ok = bound_ok && blowups == 0;
    if (!out.ok) out.error = blowups ? "trajectories blew up" : "uniform moment bound violated";
    return out;
}

RunOutcome run_tv(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const SimParams params = cfg.to_sim_params();
    const Observable obs = cfg.to_observable();

    const auto ens = run_ensemble(spec, params,
                                  {scaled_e1(cfg, cfg.tv_magnitude),
                                   SpectralField(static_cast<std::size_t>(cfg.n_modes))},
                                  cfg.n_traj);
    const auto curve = tv_lower(ens[0], ens[1], spec, obs, cfg.bins);

    std::vector<std::vector<double>> rows;
    std::vector<double> ts, tvs;
    for (const auto& p : curve) {
        rows.push_back({p.t, p.tv, p.mc_err, p.low_count ? 1.0 : 0.0});
        ts.push_back(p.t);
        tvs.push_back(p.tv);
    }
    write_csv(out_path(cfg, "tv_curve.csv"), {"t", "tv", "mc_err", "low_count"}, rows);
    out.outputs.push_back("tv_curve.csv");

    json summary;
    summary["projection"] = obs.name();
    summary["bins"] = cfg.bins;
    summary["magnitude"] = cfg.tv_magnitude;
    const int blowups = ens[0].n_blowups() + ens[1].n_blowups();
    summary["blowups"] = blowups;
    try {
        const DecayFit fit = fit_decay(ts, tvs, cfg.fit_t_min, cfg.fit_t_max);
        summary["fit"] = fit_json(fit);
    } catch (const std::exception& ex) {
        summary["fit_error"] = ex.what();
    }
    write_file(out_path(cfg, "tv_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("tv_summary.json");
    out.summary = summary;
    out.ok = blowups == 0;
    if (!out.ok) out.error = "trajectories blew up";
    return out;
}

RunOutcome run_uniformity(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const SimParams params = cfg.to_sim_params();

    UniformitySweepParams sw;
    sw.magnitudes = cfg.resolved_magnitudes();
    sw.eps_level = cfg.eps_level;
    sw.bins = cfg.bins;
    sw.obs = cfg.to_observable();
    sw.n_traj = cfg.n_traj;
    const auto points = uniformity_sweep(spec, params, sw);

    std::vector<std::vector<double>> rows;
    int censored = 0;
    for (const auto& p : points) {
        rows.push_back({p.magnitude, p.time_to_eps, p.censored ? 1.0 : 0.0});
        censored += p.censored ? 1 : 0;
    }
    write_csv(out_path(cfg, "uniformity.csv"), {"magnitude", "time_to_eps", "censored"}, rows);
    out.outputs.push_back("uniformity.csv");

    json summary;
    summary["eps_level"] = cfg.eps_level;
    summary["bins"] = cfg.bins;
    summary["projection"] = sw.obs.name();
    summary["censored"] = censored;
    write_file(out_path(cfg, "uniformity_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("uniformity_summary.json");
    out.summary = summary;
    out.ok = true;
    return out;
}

RunOutcome run_minorize(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();

    std::vector<SpectralField> stress;
    for (double m : cfg.resolved_stress_magnitudes()) {
        stress.push_back(scaled_e1(cfg, m));
        if (m > 0.0) stress.push_back(scaled_e1(cfg, -m));
    }
    if (cfg.stress_rough) {
        double top = 0.0;
        for (double m : cfg.resolved_stress_magnitudes()) top = std::max(top, m);
        if (top > 0.0) {
            stress.push_back(rough_field(spec, top));
            SpectralField neg = rough_field(spec, top);
            for (double& c : neg.coeffs) c = -c;
            stress.push_back(neg);
        }
    }

    const CompactSetSpec k_set{cfg.k_sup_radius, cfg.k_sobolev_theta, cfg.k_sobolev_radius};
    const auto res =
        minorization_probe(spec, stress, k_set, cfg.t_probe, cfg.n_traj, cfg.seed, cfg.dt);

    std::vector<std::vector<double>> rows;
    for (const auto& p : res.points) {
        rows.push_back({p.x0_sup, static_cast<double>(p.hits), static_cast<double>(p.n), p.freq,
                        p.wilson_lb});
    }
    write_csv(out_path(cfg, "minorize.csv"), {"x0_sup", "hits", "n", "freq", "wilson_lb"}, rows);
    out.outputs.push_back("minorize.csv");

    json summary;
    summary["kappa_hat"] = res.kappa_hat;
    summary["kappa_wilson_lb"] = res.kappa_wilson_lb;
    summary["t_probe"] = cfg.t_probe;
    summary["k_set"] = {{"sup_radius", cfg.k_sup_radius},
                        {"sobolev_theta", cfg.k_sobolev_theta},
                        {"sobolev_radius", cfg.k_sobolev_radius}};
    if (!res.advice.empty()) summary["advice"] = res.advice;
    write_file(out_path(cfg, "minorize_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("minorize_summary.json");
    out.summary = summary;
    out.ok = res.kappa_wilson_lb > 0.0;
    if (!out.ok) out.error = "minorization probe found no uniform mass";
    return out;
}

RunOutcome run_gap(const RunConfig& cfg) {
    RunOutcome out;
    const ModelSpec spec = cfg.to_model_spec();
    const Observable obs = cfg.to_observable();

    double burn_in = cfg.gap_burn_in;
    json pilot_info;
    if (burn_in < 0.0) {
        // Pilot: a coarse TV fit fixes the burn-in at 10 correlation times.
        RunConfig pilot = cfg;
        pilot.n_traj = std::min(cfg.n_traj, 400);
        pilot.record_times.clear();
        pilot.t_end = 4.0;
        for (double t = 0.0; t <= 4.0 + 1e-9; t += 0.25) pilot.record_times.push_back(t);
        const SimParams pparams = pilot.to_sim_params();
        const auto pens = run_ensemble(spec, pparams,
                                       {scaled_e1(cfg, cfg.tv_magnitude),
                                        SpectralField(static_cast<std::size_t>(cfg.n_modes))},
                                       pilot.n_traj);
        const auto curve = tv_lower(pens[0], pens[1], spec, obs, std::min(cfg.bins, 32));
        std::vector<double> ts, tvs;
        for (const auto& p : curve) {
            ts.push_back(p.t);
            tvs.push_back(p.tv);
        }
        double gamma_prelim = 1.0;
        try {
            const DecayFit f = fit_decay(ts, tvs, 0.25, 3.0);
            if (f.gamma_rate > 1e-3) gamma_prelim = f.gamma_rate;
            pilot_info["gamma_prelim"] = f.gamma_rate;
        } catch (const std::exception&) {
            pilot_info["gamma_prelim_fallback"] = gamma_prelim;
        }
        burn_in = 10.0 / gamma_prelim;
    }

    SimParams params;
    params.dt = cfg.dt;
    params.seed = cfg.seed;
    params.noise_on = true;
    for (int i = 0; i <= cfg.gap_n_samples; ++i) {
        params.record_times.push_back(burn_in + cfg.gap_sample_dt * static_cast<double>(i));
    }
    params.t_end = params.record_times.back();

    const TrajectoryResult traj =
        simulate_trajectory(spec, SpectralField(static_cast<std::size_t>(cfg.n_modes)), params);
    if (traj.blowup) {
        out.ok = false;
        out.error = "gap trajectory blew up";
        return out;
    }
    std::vector<double> series;
    series.reserve(traj.x.size());
    for (const auto& f : traj.x) series.push_back(obs.eval(f, spec));

    const GapEstimate gap = stationary_gap(series, cfg.gap_sample_dt);

    std::vector<std::vector<double>> rows;
    for (const auto& p : gap.curve) rows.push_back({p.lag_time, p.rho});
    write_csv(out_path(cfg, "autocorr.csv"), {"lag_time", "rho"}, rows);
    out.outputs.push_back("autocorr.csv");

    json summary;
    summary["fit"] = fit_json(gap.fit);
    summary["degenerate"] = gap.degenerate;
    summary["burn_in"] = burn_in;
    summary["sample_dt"] = cfg.gap_sample_dt;
    summary["n_samples"] = static_cast<int>(series.size());
    summary["observable"] = obs.name();
    // The spectral-gap reading of the fit presumes a reversible semigroup,
    // which holds for gradient-type drifts with commuting covariance; we do
    // not verify it, we record the assumption.
    summary["reversibility_assumed"] = true;
    if (!pilot_info.empty()) summary["pilot"] = pilot_info;
    write_file(out_path(cfg, "gap_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("gap_summary.json");
    out.summary = summary;
    out.ok = !gap.degenerate;
    if (!out.ok) out.error = "autocorrelation did not decay cleanly";
    return out;
}

RunOutcome run_doeblin(const RunConfig& cfg) {
    RunOutcome out;
    const DoeblinCertificate cert{cfg.doeblin_t_steps, cfg.doeblin_m0};
    const DoeblinConstants c = doeblin_constants(cert);

    // Exact self-check on a two-state chain whose Doeblin mass matches m0:
    // off-diagonals m0/2 + delta chosen so min-sums give exactly m0.
    const TwoStateChain chain(cfg.doeblin_m0 * 0.6, cfg.doeblin_m0 * 0.4);
    const double q_chain = 1.0 - chain.doeblin_mass();
    double worst = 0.0;
    json table = json::array();
    const double tv0 = chain.tv_after(0);
    for (int n = 1; n <= 10; ++n) {
        const double tv = chain.tv_after(n);
        const double bound = std::pow(q_chain, n) * tv0;
        worst = std::max(worst, tv - bound);
        table.push_back({{"n", n}, {"tv", tv}, {"bound", bound}});
    }

    json summary;
    summary["t_steps"] = cfg.doeblin_t_steps;
    summary["m0"] = cfg.doeblin_m0;
    summary["q"] = c.q;
    summary["beta"] = c.beta;
    summary["C"] = c.amplitude;
    summary["gamma_rate"] = c.gamma_rate;
    summary["chain_check"] = {{"doeblin_mass", chain.doeblin_mass()},
                              {"max_violation", worst},
                              {"table", table}};
    write_file(out_path(cfg, "doeblin_summary.json"), summary.dump(2) + "\n");
    out.outputs.push_back("doeblin_summary.json");
    out.summary = summary;
    out.ok = worst <= 1e-12;
    if (!out.ok) out.error = "synthetic chain violated the contraction bound";
    return out;
}

RunOutcome run_report(const RunConfig& cfg) {
    RunOutcome out;
    json bundle = json::object();
    const char* names[] = {"check_summary.json",    "simulate_summary.json",
                           "moments_summary.json",  "tv_summary.json",
                           "uniformity_summary.json", "minorize_summary.json",
                           "gap_summary.json",      "doeblin_summary.json"};
    for (const char* name : names) {
        const auto path = fs::path(cfg.output_dir) / name;
        if (fs::exists(path)) {
            bundle[name] = json::parse(read_file(path.string()));
        }
    }
    json summary;
    summary["bundled"] = bundle;
    summary["missing_note"] =
        bundle.empty() ? "no prior experiment outputs found in output_dir" : "";
    write_file(out_path(cfg, "report.json"), summary.dump(2) + "\n");
    out.outputs.push_back("report.json");
    out.summary = summary;
    out.ok = true;
    return out;
}

} // namespace

json make_manifest(const RunConfig& cfg, const RunOutcome& outcome) {
    json m;
    m["tool"] = {{"name", "ergolab"}, {"version", kVersion}};
    m["formats"] = {{"csv", 1}, {"summary", 1}};
    m["experiment"] = to_string(cfg.experiment);
    m["seed"] = cfg.seed;
    m["seed_derivation"] =
        "child = mix64-combine(mix64-combine(seed, x0_index), trajectory_index)";
    m["config"] = emit_config(cfg);
    m["outputs"] = outcome.outputs;
    m["ok"] = outcome.ok;
    if (!outcome.error.empty()) m["error"] = outcome.error;
    return m;
}

RunOutcome run_experiment(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    RunOutcome out;
    try {
        switch (cfg.experiment) {
        case ExperimentKind::Check: out = run_check(cfg); break;
        case ExperimentKind::Simulate: out = run_simulate(cfg); break;
        case ExperimentKind::Moments: out = run_moments(cfg); break;
        case ExperimentKind::Tv: out = run_tv(cfg); break;
        case ExperimentKind::Uniformity: out = run_uniformity(cfg); break;
        case ExperimentKind::Minorize: out = run_minorize(cfg); break;
        case ExperimentKind::Gap: out = run_gap(cfg); break;
        case ExperimentKind::Doeblin: out = run_doeblin(cfg); break;
        case ExperimentKind::Report: out = run_report(cfg); break;
        }
    } catch (const std::exception& ex) {
        out.ok = false;
        out.error = ex.what();
    }
    write_file(out_path(cfg, "manifest.json"), make_manifest(cfg, out).dump(2) + "\n");
    return out;
}

} // namespace ergo
