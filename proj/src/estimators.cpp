#include "ergo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {
constexpr double kWilsonZ = 1.959963984540054;  // 97.5% normal quantile
constexpr double kTwoOverPi = 0.6366197723675814;
} // namespace

std::string Observable::name() const {
    return mode == 0 ? "sup_norm" : ("mode" + std::to_string(mode));
}

double Observable::eval(const SpectralField& f, const ModelSpec& spec) const {
    if (mode == 0) return spec.sup_norm(f);
    if (mode < 1 || mode > spec.n_modes())
        throw std::invalid_argument("Observable: mode out of range");
    return f.coeffs[static_cast<std::size_t>(mode - 1)];
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                   double t_min, double t_max) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay: times/values length mismatch");
    std::vector<double> t, logv;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_min || times[i] > t_max) continue;
        if (!(values[i] > 0.0)) continue;  // log of positive values only
        t.push_back(times[i]);
        logv.push_back(std::log(values[i]));
    }
    if (t.size() < 4)
        throw std::invalid_argument(
            "fit_decay: fewer than 4 positive points in the window (nonpositive values rejected)");

    const double n = static_cast<double>(t.size());
    double st = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sv += logv[i];
    }
    const double mt = st / n, mv = sv / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dx = t[i] - mt, dy = logv[i] - mv;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_decay: degenerate time window");
    const double slope = sxy / sxx;
    const double intercept = mv - slope * mt;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = logv[i] - (intercept + slope * t[i]);
        ss_res += r * r;
    }
    DecayFit fit;
    fit.amplitude = std::exp(intercept);
    fit.gamma_rate = -slope;
    fit.r2 = (syy > 1e-30) ? std::max(0.0, 1.0 - ss_res / syy) : 0.0;
    fit.t_min = t.front();
    fit.t_max = t.back();
    fit.n_points = static_cast<int>(t.size());
    return fit;
}

std::vector<MomentPoint> moment_curve(const Ensemble& ensemble, const ModelSpec& spec) {
    if (ensemble.n_traj() < 2) throw std::invalid_argument("moment_curve: need >= 2 trajectories");
    std::vector<MomentPoint> out;
    out.reserve(ensemble.times.size());
    for (std::size_t t = 0; t < ensemble.times.size(); ++t) {
        const auto idx = ensemble.valid_at(t);
        MomentPoint p{ensemble.times[t], 0.0, 0.0, static_cast<int>(idx.size())};
        if (!idx.empty()) {
            double sum = 0.0, sumsq = 0.0;
            for (int i : idx) {
                const double s = spec.sup_norm(ensemble.snaps[t][static_cast<std::size_t>(i)]);
                sum += s;
                sumsq += s * s;
            }
            const double n = static_cast<double>(idx.size());
            p.mean_sup = sum / n;
            const double var = std::max(0.0, sumsq / n - p.mean_sup * p.mean_sup);
            p.std_err = idx.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        }
        out.push_back(p);
    }
    return out;
}

double gaussian_tv(double mean1, double mean2, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_tv: sigma must be > 0");
    const double d = std::abs(mean1 - mean2);
    // 2Φ(d/2σ) - 1 = erf(d/(2σ·sqrt(2)))
    return std::erf(d / (2.0 * sigma * M_SQRT2));
}

std::vector<TvPoint> tv_lower(const Ensemble& a, const Ensemble& b, const ModelSpec& spec,
                              const Observable& obs, int bins) {
    if (bins < 8) throw std::invalid_argument("tv_lower: bins must be >= 8");
    if (a.times != b.times)
        throw std::invalid_argument("tv_lower: ensembles must share identical record times");

    std::vector<TvPoint> out;
    out.reserve(a.times.size());
    for (std::size_t t = 0; t < a.times.size(); ++t) {
        const auto ia = a.valid_at(t);
        const auto ib = b.valid_at(t);
        if (ia.size() < 2 || ib.size() < 2)
            throw std::invalid_argument("tv_lower: too few valid trajectories at a record time");
        const std::vector<double> xa = a.gather(t, ia, spec, obs.mode);
        const std::vector<double> xb = b.gather(t, ib, spec, obs.mode);

        double lo = xa[0], hi = xa[0];
        for (double v : xa) { lo = std::min(lo, v); hi = std::max(hi, v); }
        for (double v : xb) { lo = std::min(lo, v); hi = std::max(hi, v); }

        TvPoint p{a.times[t], 0.0, 0.0, false};
        if (hi > lo) {
            const auto nb = static_cast<std::size_t>(bins);
            std::vector<double> pa(nb, 0.0), pb(nb, 0.0);
            const double width = (hi - lo) / static_cast<double>(bins);
            auto fill = [&](const std::vector<double>& xs, std::vector<double>& h) {
                const double w = 1.0 / static_cast<double>(xs.size());
                for (double v : xs) {
                    auto k = static_cast<std::size_t>((v - lo) / width);
                    if (k >= nb) k = nb - 1;
                    h[k] += w;
                }
            };
            fill(xa, pa);
            fill(xb, pb);

            const double na = static_cast<double>(xa.size());
            const double nbt = static_cast<double>(xb.size());
            double tv = 0.0, bias = 0.0, var = 0.0;
            for (std::size_t k = 0; k < nb; ++k) {
                tv += std::abs(pa[k] - pb[k]);
                const double v_k = pa[k] * (1.0 - pa[k]) / na + pb[k] * (1.0 - pb[k]) / nbt;
                bias += std::sqrt(kTwoOverPi * v_k);
                var += v_k;
                const double pooled = 0.5 * (pa[k] + pb[k]);
                if (pooled > 0.0 && pooled * std::min(na, nbt) < 5.0) p.low_count = true;
            }
            p.tv = std::clamp(0.5 * tv, 0.0, 1.0);
            p.mc_err = 0.5 * bias + 0.5 * std::sqrt(var);
        }
        out.push_back(p);
    }
    return out;
}

std::vector<SweepPoint> uniformity_sweep(const ModelSpec& spec, const SimParams& params,
                                         const UniformitySweepParams& sweep, int n_threads) {
    if (sweep.magnitudes.empty()) throw std::invalid_argument("uniformity_sweep: no magnitudes");
    for (double m : sweep.magnitudes) {
        if (m < 0.0) throw std::invalid_argument("uniformity_sweep: magnitudes must be >= 0");
    }

    const auto n = static_cast<std::size_t>(spec.n_modes());
    std::vector<SpectralField> x0s;
    x0s.push_back(SpectralField(n));  // the reference at index 0
    for (double m : sweep.magnitudes) x0s.push_back(SpectralField::single_mode(n, 1, m));

    const auto ens = run_ensemble(spec, params, x0s, sweep.n_traj, n_threads);

    std::vector<SweepPoint> out;
    for (std::size_t k = 0; k < sweep.magnitudes.size(); ++k) {
        const auto curve = tv_lower(ens[k + 1], ens[0], spec, sweep.obs, sweep.bins);
        SweepPoint pt{sweep.magnitudes[k], curve.back().t, true};
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i].tv <= sweep.eps_level) {
                if (i == 0 || curve[i - 1].tv <= sweep.eps_level) {
                    pt.time_to_eps = curve[i].t;
                } else {
                    const double t0 = curve[i - 1].t, t1 = curve[i].t;
                    const double v0 = curve[i - 1].tv, v1 = curve[i].tv;
                    pt.time_to_eps = t0 + (v0 - sweep.eps_level) / (v0 - v1) * (t1 - t0);
                }
                pt.censored = false;
                break;
            }
        }
        out.push_back(pt);
    }
    return out;
}

bool CompactSetSpec::contains(const SpectralField& f, const ModelSpec& spec) const {
    return spec.sup_norm(f) <= sup_radius &&
           spec.sobolev_norm(f, sobolev_theta) <= sobolev_radius;
}

double wilson_lower_bound(int hits, int n) {
    if (n <= 0) throw std::invalid_argument("wilson_lower_bound: n must be > 0");
    const double z = kWilsonZ;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = p + z * z / (2.0 * nn);
    const double spread = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
    return std::max(0.0, (center - spread) / denom);
}

MinorizationResult minorization_probe(const ModelSpec& spec,
                                      const std::vector<SpectralField>& stress_x0s,
                                      const CompactSetSpec& k_set, double t_probe, int n_traj,
                                      std::uint64_t seed, double dt, int n_threads) {
    if (stress_x0s.empty()) throw std::invalid_argument("minorization_probe: empty stress set");
    if (!(t_probe > 0.0)) throw std::invalid_argument("minorization_probe: t_probe must be > 0");

    SimParams params;
    params.dt = dt;
    params.t_end = t_probe;
    params.record_times = {t_probe};
    params.seed = seed;
    params.noise_on = true;

    const auto ens = run_ensemble(spec, params, stress_x0s, n_traj, n_threads);

    MinorizationResult res;
    res.kappa_hat = 1.0;
    res.kappa_wilson_lb = 1.0;
    for (std::size_t k = 0; k < stress_x0s.size(); ++k) {
        MinorizationPoint p{spec.sup_norm(stress_x0s[k]), 0, n_traj, 0.0, 0.0};
        for (int i = 0; i < n_traj; ++i) {
            if (ens[k].valid_times[static_cast<std::size_t>(i)] < 1) continue;  // blow-up: a miss
            if (k_set.contains(ens[k].snaps[0][static_cast<std::size_t>(i)], spec)) ++p.hits;
        }
        p.freq = static_cast<double>(p.hits) / static_cast<double>(n_traj);
        p.wilson_lb = wilson_lower_bound(p.hits, n_traj);
        if (p.hits == 0) res.advice = "some stress point never reached K: enlarge the radii";
        res.kappa_hat = std::min(res.kappa_hat, p.freq);
        res.kappa_wilson_lb = std::min(res.kappa_wilson_lb, p.wilson_lb);
        res.points.push_back(p);
    }
    return res;
}

GapEstimate stationary_gap(const std::vector<double>& samples, double sample_dt, int max_lag) {
    if (!(sample_dt > 0.0)) throw std::invalid_argument("stationary_gap: sample_dt must be > 0");
    const auto n = samples.size();
    if (n < 16) throw std::invalid_argument("stationary_gap: series too short");
    if (max_lag <= 0) max_lag = static_cast<int>(n / 4);
    max_lag = std::min<int>(max_lag, static_cast<int>(n) - 2);

    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    if (var <= 0.0) throw std::invalid_argument("stationary_gap: constant series");

    // Fit window floor: lags whose correlation has sunk to the estimator's
    // noise level would flatten the log-linear slope.
    constexpr double kFitFloor = 0.05;

    GapEstimate out;
    out.curve.push_back({0.0, 1.0});
    std::vector<double> t, rho;
    for (int lag = 1; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < n; ++i) {
            acc += (samples[i] - mean) * (samples[i + static_cast<std::size_t>(lag)] - mean);
        }
        const double r = acc / var;
        out.curve.push_back({sample_dt * lag, r});
        if (r <= kFitFloor) break;
        t.push_back(sample_dt * lag);
        rho.push_back(r);
    }

    if (t.size() < 4) {
        // Correlation dies inside the first lags: report the one-lag rate and
        // flag the fit as unusable via r2 = 0.
        out.degenerate = true;
        const double r1 = out.curve.size() > 1 ? std::max(out.curve[1].rho, 1e-12) : 1e-12;
        out.fit.amplitude = 1.0;
        out.fit.gamma_rate = -std::log(r1) / sample_dt;
        out.fit.r2 = 0.0;
        out.fit.n_points = static_cast<int>(t.size());
        return out;
    }
    out.degenerate = false;
    out.fit = fit_decay(t, rho, t.front(), t.back());
    return out;
}

} // namespace ergo
