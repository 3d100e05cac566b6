#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ergo/model.hpp"
#include "ergo/rng.hpp"

namespace ergo {

/// Exact one-step transition of the scalar Ornstein-Uhlenbeck mode
///   dZ = -alpha·Z dt + sqrt(lambda) dW:
///   Z' = e^(-alpha·dt)·Z + sqrt(lambda·(1-e^(-2·alpha·dt))/(2·alpha))·g.
/// dt = 0 returns z unchanged.
double convolution_step(double z, double alpha, double lambda, double dt, double gaussian);

struct SimParams {
    double dt = 1e-3;
    double t_end = 5.0;
    std::vector<double> record_times;  // sorted, subset of [0, t_end]
    std::uint64_t seed = 0;
    bool noise_on = true;

    void validate() const;  // throws std::invalid_argument on violation
};

struct BlowUp {
    int mode = 0;      // 1-based offending mode
    double time = 0.0; // simulation time at detection
};

struct TrajectoryResult {
    std::vector<double> times;        // the record times actually hit
    std::vector<SpectralField> x;     // snapshots; valid prefix ends at blow-up
    std::vector<SpectralField> y;     // filled only when record_yz was requested
    std::vector<SpectralField> z;     //   "
    std::optional<BlowUp> blowup;

    std::size_t n_valid() const { return x.size(); }
};

/// Seeded collection of trajectories from one initial condition.
/// snaps[t][i] is trajectory i at record time times[t]; trajectories that
/// blew up stop contributing after their last valid record index.
struct Ensemble {
    std::vector<double> times;
    std::vector<std::vector<SpectralField>> snaps;  // [time][traj]
    std::vector<std::uint64_t> traj_seeds;
    std::vector<int> valid_times;                   // per traj, count of valid snapshots
    std::vector<std::optional<BlowUp>> blowups;     // per traj

    int n_traj() const { return static_cast<int>(traj_seeds.size()); }
    int n_blowups() const;
    double blowup_fraction() const;
    /// Trajectory indices with a valid snapshot at record index t_idx.
    std::vector<int> valid_at(std::size_t t_idx) const;
    /// Projected samples (one observable value per valid trajectory) at t_idx.
    std::vector<double> gather(std::size_t t_idx,
                               const std::vector<int>& traj_idx,
                               const ModelSpec& spec,
                               int mode) const;  // mode >= 1: coefficient; 0: grid sup-norm
};

/// One exponential-Euler macro step of the mild equation: per mode
///   x_n <- e^(-α_n dt)·x_n + (1-e^(-α_n dt))/α_n·F_n(state) + OU noise,
/// with the drift F evaluated at the step's start. Stateless wrapper around
/// the Stepper below; intended for tests and single-step experiments.
SpectralField step(const SpectralField& state, const ModelSpec& spec, double dt, Rng& rng,
                   bool noise_on = true);

/// Time integrator with per-trajectory scratch. Inside each macro interval
/// the drift is advanced in stability-limited substeps (h <= eta/max|f'|)
/// so that stiff transients from large initial data do not overflow; the
/// noise uses exact OU increments per substep, so the chain composes to the
/// exact stochastic convolution regardless of how an interval is split.
class Stepper {
public:
    explicit Stepper(const ModelSpec& spec);

    /// Advance state (and optionally the pure convolution z) by h_macro.
    /// Returns a BlowUp instead of throwing when a coefficient leaves
    /// [-limit, limit] or the substep budget is exhausted.
    std::optional<BlowUp> advance(SpectralField& state, double h_macro, double t0, Rng& rng,
                                  bool noise_on, SpectralField* z_state);

    static constexpr double kCoeffLimit = 1e8;
    static constexpr double kStabilityFactor = 0.8;
    static constexpr long kMaxSubsteps = 1 << 20;  // per macro interval

private:
    void refresh_tables(double h);

    const ModelSpec& spec_;
    std::vector<double> grid_;      // physical values scratch
    SpectralField drift_;           // spectral drift scratch
    std::vector<double> decay_;     // e^(-alpha h) for cached h
    std::vector<double> phi_;       // (1-e^(-alpha h))/alpha
    std::vector<double> sigma_;     // exact OU noise std-dev for cached h
    double cached_h_ = -1.0;
};

/// Deterministic given (params.seed treated as the trajectory seed, x0).
/// Record times are hit exactly: each inter-record segment is advanced with
/// step h = segment/ceil(segment/dt) <= dt.
TrajectoryResult simulate_trajectory(const ModelSpec& spec, const SpectralField& x0,
                                     const SimParams& params, bool record_yz = false);

/// Ensembles, one per initial condition. Trajectory i of initial condition k
/// uses seed child_seed(params.seed, k, i); trajectories are independent and
/// may run on any thread, results are identical for every thread count.
/// n_threads = 0 reads ERGOLAB_THREADS, falling back to the hardware count.
std::vector<Ensemble> run_ensemble(const ModelSpec& spec, const SimParams& params,
                                   const std::vector<SpectralField>& x0s, int n_traj,
                                   int n_threads = 0);

/// Worker-pool map over [0, n); used by the ensemble runner and estimators.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int n_threads = 0);

int resolve_thread_count(int requested);

} // namespace ergo
