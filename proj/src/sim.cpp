#include "ergo/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace ergo {

double convolution_step(double z, double alpha, double lambda, double dt, double gaussian) {
    if (!(dt > 0.0)) return z;
    const double decay = std::exp(-alpha * dt);
    const double var = lambda * (-std::expm1(-2.0 * alpha * dt)) / (2.0 * alpha);
    return decay * z + std::sqrt(var) * gaussian;
}

void SimParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SimParams: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("SimParams: t_end must be > 0");
    if (record_times.empty()) throw std::invalid_argument("SimParams: record_times is empty");
    double prev = -1.0;
    for (double t : record_times) {
        if (!(t >= 0.0) || t > t_end)
            throw std::invalid_argument("SimParams: record_times must lie in [0, t_end]");
        if (t <= prev && prev >= 0.0)
            throw std::invalid_argument("SimParams: record_times must be strictly increasing");
        prev = t;
    }
}

int Ensemble::n_blowups() const {
    int k = 0;
    for (const auto& b : blowups) k += b.has_value() ? 1 : 0;
    return k;
}

double Ensemble::blowup_fraction() const {
    return traj_seeds.empty() ? 0.0 : static_cast<double>(n_blowups()) / static_cast<double>(traj_seeds.size());
}

std::vector<int> Ensemble::valid_at(std::size_t t_idx) const {
    std::vector<int> out;
    out.reserve(traj_seeds.size());
    for (std::size_t i = 0; i < traj_seeds.size(); ++i) {
        if (static_cast<std::size_t>(valid_times[i]) > t_idx) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<double> Ensemble::gather(std::size_t t_idx, const std::vector<int>& traj_idx,
                                     const ModelSpec& spec, int mode) const {
    std::vector<double> out;
    out.reserve(traj_idx.size());
    for (int i : traj_idx) {
        const SpectralField& f = snaps[t_idx][static_cast<std::size_t>(i)];
        if (mode >= 1) {
            out.push_back(f.coeffs[static_cast<std::size_t>(mode - 1)]);
        } else {
            out.push_back(spec.sup_norm(f));
        }
    }
    return out;
}

Stepper::Stepper(const ModelSpec& spec) : spec_(spec) {
    const auto n = static_cast<std::size_t>(spec.n_modes());
    drift_.coeffs.resize(n);
    decay_.resize(n);
    phi_.resize(n);
    sigma_.resize(n);
}

void Stepper::refresh_tables(double h) {
    if (h == cached_h_) return;
    const auto n = static_cast<std::size_t>(spec_.n_modes());
    for (std::size_t k = 0; k < n; ++k) {
        const double a = spec_.alphas()[k];
        decay_[k] = std::exp(-a * h);
        phi_[k] = -std::expm1(-a * h) / a;
        sigma_[k] = std::sqrt(spec_.lambdas()[k] * (-std::expm1(-2.0 * a * h)) / (2.0 * a));
    }
    cached_h_ = h;
}

std::optional<BlowUp> Stepper::advance(SpectralField& state, double h_macro, double t0, Rng& rng,
                                       bool noise_on, SpectralField* z_state) {
    const auto n = static_cast<std::size_t>(spec_.n_modes());
    const DriftPolynomial& f = spec_.drift();
    const bool no_drift = f.is_zero();
    double remaining = h_macro;
    double t = t0;
    long substeps = 0;

    while (remaining > 0.0) {
        double h = remaining;
        if (!no_drift) {
            spec_.to_physical(state, grid_);
            // Stability bound for the explicit drift term: h·max|f'| <= eta.
            double lip = 0.0;
            const double c0 = f.constant_term();
            for (double& g : grid_) {
                lip = std::max(lip, std::abs(f.eval_derivative(g)));
                g = f.eval(g) - c0;
            }
            if (lip * h > kStabilityFactor) h = kStabilityFactor / lip;
            spec_.to_spectral(grid_, drift_);
            if (c0 != 0.0) {
                for (std::size_t k = 0; k < n; ++k)
                    drift_.coeffs[k] += c0 * spec_.constant_projection(static_cast<int>(k) + 1);
            }
        }
        if (++substeps > kMaxSubsteps) {
            std::size_t worst = 0;
            for (std::size_t k = 1; k < n; ++k)
                if (std::abs(state.coeffs[k]) > std::abs(state.coeffs[worst])) worst = k;
            return BlowUp{static_cast<int>(worst) + 1, t};
        }
        refresh_tables(h);
        for (std::size_t k = 0; k < n; ++k) {
            double v = decay_[k] * state.coeffs[k];
            if (!no_drift) v += phi_[k] * drift_.coeffs[k];
            if (noise_on) {
                // Same expression shape for the state and the convolution so
                // that X and Z stay bitwise equal when F = 0.
                const double noise = sigma_[k] * rng.next_gaussian();
                v += noise;
                if (z_state) {
                    double zv = decay_[k] * z_state->coeffs[k];
                    zv += noise;
                    z_state->coeffs[k] = zv;
                }
            } else if (z_state) {
                z_state->coeffs[k] = decay_[k] * z_state->coeffs[k];
            }
            state.coeffs[k] = v;
        }
        t += h;
        remaining -= h;
        // Snap away roundoff so segment ends are hit exactly.
        if (remaining < 1e-12 * h_macro) remaining = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
            const double v = state.coeffs[k];
            if (!std::isfinite(v) || std::abs(v) > kCoeffLimit) {
                return BlowUp{static_cast<int>(k) + 1, t};
            }
        }
    }
    return std::nullopt;
}

SpectralField step(const SpectralField& state, const ModelSpec& spec, double dt, Rng& rng,
                   bool noise_on) {
    if (state.size() != static_cast<std::size_t>(spec.n_modes()))
        throw std::invalid_argument("step: dimension mismatch");
    SpectralField out = state;
    if (!(dt > 0.0)) return out;

    // One literal application of the scheme, no substepping: the contract of
    // a single step. Used by tests; simulate_trajectory guards stability.
    SpectralField drift = spec.apply_drift(state);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double a = spec.alphas()[k];
        const double decay = std::exp(-a * dt);
        double v = decay * out.coeffs[k] - std::expm1(-a * dt) / a * drift.coeffs[k];
        if (noise_on) v += convolution_step(0.0, a, spec.lambdas()[k], dt, rng.next_gaussian());
        out.coeffs[k] = v;
    }
    return out;
}

TrajectoryResult simulate_trajectory(const ModelSpec& spec, const SpectralField& x0,
                                     const SimParams& params, bool record_yz) {
    params.validate();
    if (x0.size() != static_cast<std::size_t>(spec.n_modes()))
        throw std::invalid_argument("simulate_trajectory: x0 dimension mismatch");

    TrajectoryResult res;
    Rng rng(params.seed);
    Stepper stepper(spec);
    SpectralField state = x0;
    SpectralField z(state.size());

    double t = 0.0;
    auto record = [&](double time) {
        res.times.push_back(time);
        res.x.push_back(state);
        if (record_yz) {
            res.z.push_back(z);
            SpectralField y = state;
            for (std::size_t k = 0; k < y.size(); ++k) y.coeffs[k] -= z.coeffs[k];
            res.y.push_back(y);
        }
    };

    for (double target : params.record_times) {
        const double seg = target - t;
        if (seg > 0.0) {
            const long n_steps = std::max(1L, static_cast<long>(std::ceil(seg / params.dt - 1e-12)));
            const double h = seg / static_cast<double>(n_steps);
            for (long s = 0; s < n_steps; ++s) {
                auto blow = stepper.advance(state, h, t, rng, params.noise_on,
                                            record_yz ? &z : nullptr);
                if (blow) {
                    res.blowup = blow;
                    return res;
                }
                t += h;
            }
            t = target;
        }
        record(target);
    }
    return res;
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ERGOLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int n_threads) {
    const int threads = std::min<int>(resolve_thread_count(n_threads), static_cast<int>(std::max<std::size_t>(n, 1)));
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads - 1));
    for (int k = 0; k < threads - 1; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

std::vector<Ensemble> run_ensemble(const ModelSpec& spec, const SimParams& params,
                                   const std::vector<SpectralField>& x0s, int n_traj,
                                   int n_threads) {
    params.validate();
    if (x0s.empty()) throw std::invalid_argument("run_ensemble: no initial conditions");
    if (n_traj < 2) throw std::invalid_argument("run_ensemble: n_traj must be >= 2");

    const std::size_t n_times = params.record_times.size();
    const auto n_x0 = x0s.size();
    const auto traj = static_cast<std::size_t>(n_traj);

    std::vector<Ensemble> out(n_x0);
    for (std::size_t k = 0; k < n_x0; ++k) {
        Ensemble& e = out[k];
        e.times = params.record_times;
        e.snaps.assign(n_times, std::vector<SpectralField>(traj));
        e.traj_seeds.resize(traj);
        e.valid_times.assign(traj, 0);
        e.blowups.assign(traj, std::nullopt);
        for (std::size_t i = 0; i < traj; ++i) {
            e.traj_seeds[i] = child_seed(params.seed, k, i);
        }
    }

    parallel_for(n_x0 * traj, [&](std::size_t flat) {
        const std::size_t k = flat / traj;
        const std::size_t i = flat % traj;
        SimParams p = params;
        p.seed = out[k].traj_seeds[i];
        TrajectoryResult r = simulate_trajectory(spec, x0s[k], p);
        Ensemble& e = out[k];
        for (std::size_t t = 0; t < r.x.size(); ++t) e.snaps[t][i] = std::move(r.x[t]);
        e.valid_times[i] = static_cast<int>(r.x.size());
        e.blowups[i] = r.blowup;
    }, n_threads);

    return out;
}

} // namespace ergo
