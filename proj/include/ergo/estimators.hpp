#pragma once

#include <string>
#include <vector>

#include "ergo/model.hpp"
#include "ergo/sim.hpp"

namespace ergo {

/// Scalar projection of a field: mode >= 1 picks that eigencoefficient,
/// mode = 0 the collocation sup-norm. Total variation is non-increasing
/// under any such map, so histogram TV on a projection lower-bounds the
/// full-space TV.
struct Observable {
    int mode = 1;

    std::string name() const;
    double eval(const SpectralField& f, const ModelSpec& spec) const;
};

/// C·e^(-γt) least-squares fit on log values.
struct DecayFit {
    double amplitude = 0.0;
    double gamma_rate = 0.0;
    double r2 = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    int n_points = 0;
};

/// Log-linear least squares on the points with t in [t_min,t_max] and v > 0;
/// nonpositive values are dropped, fewer than 4 usable points is an error.
/// r2 is forced to 0 when the data carry no variance to explain.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                   double t_min, double t_max);

struct MomentPoint {
    double t;
    double mean_sup;
    double std_err;
    int n;  // trajectories contributing (blow-ups excluded)
};

/// Empirical E||X(t)|| (grid sup-norm) per record time with MC standard error.
std::vector<MomentPoint> moment_curve(const Ensemble& ensemble, const ModelSpec& spec);

/// Exact total variation (on the [0,1] scale) between N(mean1,sigma²) and
/// N(mean2,sigma²): 2Φ(|Δ|/(2σ)) - 1.
double gaussian_tv(double mean1, double mean2, double sigma);

struct TvPoint {
    double t;
    double tv;        // ½·Σ_bins |p̂_A - p̂_B|, clamped to [0,1]
    double mc_err;    // plug-in error: folding-bias envelope + one sigma
    bool low_count;   // some occupied bin expects < 5 samples
};

/// Histogram TV lower bound between two ensembles sharing record times.
std::vector<TvPoint> tv_lower(const Ensemble& a, const Ensemble& b, const ModelSpec& spec,
                              const Observable& obs, int bins);

struct SweepPoint {
    double magnitude;
    double time_to_eps;  // linearly interpolated first crossing
    bool censored;       // never reached within the record window
};

struct UniformitySweepParams {
    std::vector<double> magnitudes;
    double eps_level = 0.25;
    int bins = 32;
    Observable obs{1};
    int n_traj = 1000;
};

/// Time for TV̂(x0 = m·e_1 vs x0 = 0) to drop below eps_level, per magnitude.
std::vector<SweepPoint> uniformity_sweep(const ModelSpec& spec, const SimParams& params,
                                         const UniformitySweepParams& sweep, int n_threads = 0);

/// Compact candidate K = {sup <= sup_radius} ∩ {sobolev(θ) <= sobolev_radius}.
struct CompactSetSpec {
    double sup_radius;
    double sobolev_theta;
    double sobolev_radius;

    bool contains(const SpectralField& f, const ModelSpec& spec) const;
};

struct MinorizationPoint {
    double x0_sup;  // sup-norm of the stress initial condition
    int hits;
    int n;
    double freq;
    double wilson_lb;  // 95% lower confidence bound
};

struct MinorizationResult {
    std::vector<MinorizationPoint> points;
    double kappa_hat;       // min over stress points of the hit frequency
    double kappa_wilson_lb; // min of the Wilson lower bounds
    std::string advice;     // non-empty when some stress point never hit K
};

/// Empirical inf_x P(t_probe, x, K) over the stress set.
MinorizationResult minorization_probe(const ModelSpec& spec,
                                      const std::vector<SpectralField>& stress_x0s,
                                      const CompactSetSpec& k_set, double t_probe, int n_traj,
                                      std::uint64_t seed, double dt, int n_threads = 0);

/// 95% Wilson lower confidence bound for a binomial proportion.
double wilson_lower_bound(int hits, int n);

struct AutocorrPoint {
    double lag_time;
    double rho;
};

struct GapEstimate {
    std::vector<AutocorrPoint> curve;
    DecayFit fit;       // r2 = 0 flags an unusable (non-decaying) correlation
    bool degenerate;    // too few positive lags to fit
};

/// Autocorrelation decay rate of a stationary scalar series sampled every
/// sample_dt. Fits the positive-correlation prefix of the lag curve.
GapEstimate stationary_gap(const std::vector<double>& samples, double sample_dt,
                           int max_lag = 0);

} // namespace ergo
