#include "ergo/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ergo {

namespace {

constexpr double kSeriesMarginEps = 0.0;  // exponent must exceed 1 strictly

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

Verdict check_hs_integrability(const ModelSpec& spec, double alpha_exp, double T) {
    if (!(alpha_exp > 0.0 && alpha_exp < 1.0))
        throw std::invalid_argument("check_hs_integrability: alpha_exp must lie in (0,1)");
    if (!(T > 0.0)) throw std::invalid_argument("check_hs_integrability: T must be > 0");

    const int n_modes = spec.n_modes();
    const double gamma_factor = std::tgamma(1.0 - alpha_exp);

    // Per-mode envelope: ∫_0^∞ t^(-a)·λ_n e^(-2α_n t) dt = λ_n·Γ(1-a)·(2α_n)^(a-1),
    // an upper bound for the integral over (0,T).
    auto term = [&](int n) {
        return spec.lambda(n) * gamma_factor * std::pow(2.0 * spec.alpha(n), alpha_exp - 1.0);
    };
    double truncated = 0.0;
    for (int n = 1; n <= n_modes; ++n) truncated += term(n);

    Verdict v;
    const CovarianceSpec& cov = spec.covariance();
    if (cov.kind() == CovarianceKind::Explicit) {
        // No tail law available: judge growth from the last term doublings.
        if (n_modes < 4) {
            v.passed = true;
            v.margin = 1.0;
            v.detail = "explicit spectrum with < 4 modes: finite-rank sum";
            v.witness = {{"value", truncated}};
            return v;
        }
        const double ratio = term(n_modes) / term(n_modes / 2);
        const double growth = std::log2(ratio);  // term ~ n^growth
        v.margin = -growth - 1.0;
        v.passed = v.margin > kSeriesMarginEps;
        v.witness = {{"value", truncated}, {"term_growth_exponent", growth}};
        v.detail = "explicit spectrum: partial-sum growth heuristic, term ~ n^" + fmt(growth);
        return v;
    }

    // λ_n = c·α_n^(-a_cov) with a_cov = 0 for identity; α_n ~ n²:
    // term ~ n^(-q), q = 2(a_cov + 1 - alpha_exp).
    const double a_cov = (cov.kind() == CovarianceKind::PowerLaw) ? cov.exponent() : 0.0;
    const double q = 2.0 * (a_cov + 1.0 - alpha_exp);
    v.margin = q - 1.0;
    v.passed = v.margin > kSeriesMarginEps;
    if (v.passed) {
        // Integral comparison bound on the tail of Σ const·n^(-q).
        const double last = term(n_modes);
        const double tail = last * static_cast<double>(n_modes) / (q - 1.0);
        v.witness = {{"value", truncated + tail}, {"series_exponent", q}};
    } else {
        v.witness = {{"series_exponent", q}};
    }
    v.detail = "comparison series exponent q = " + fmt(q) + " (needs q > 1); T = " + fmt(T);
    return v;
}

namespace {

// min over t >= 0 of A(1-t)^p + c2·t^p for odd p and (the t>1 branch needs
// c2 >= result, which holds since the minimum is <= A <= c2).
double homogeneous_floor(double lead_abs, double c2, int p) {
    const double r = std::pow(lead_abs / c2, 1.0 / static_cast<double>(p - 1));
    const double t = r / (1.0 + r);
    return lead_abs * std::pow(1.0 - t, p) + c2 * std::pow(t, p);
}

} // namespace

Verdict check_drift_dissipativity(const DriftPolynomial& drift, double epsilon, double s,
                                  double box, int grid_steps) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("check_drift_dissipativity: epsilon must be > 0");
    if (!(s > 0.0)) throw std::invalid_argument("check_drift_dissipativity: s must be > 0");
    if (!(box > 0.0)) throw std::invalid_argument("check_drift_dissipativity: box must be > 0");
    if (grid_steps < 3) throw std::invalid_argument("check_drift_dissipativity: grid too coarse");

    Verdict v;
    const int p = drift.degree();
    const double lead = drift.leading_coefficient();

    if (p < 1) {
        v.passed = false;
        v.margin = -1.0;
        v.counterexample = {{2.0 * box, 0.0}};
        v.detail = "drift has no superlinear decay (degree < 1)";
        return v;
    }
    if (p % 2 == 0 || lead >= 0.0) {
        const double right = drift.eval(box) * 1.0;
        const double left = drift.eval(-box) * -1.0;
        v.passed = false;
        v.margin = -std::max(right, left);
        v.counterexample = {{right >= left ? box : -box, 0.0}};
        v.detail = (p % 2 == 0) ? "even-degree drift grows the wrong way on one side"
                                : "positive leading coefficient: repelling at infinity";
        return v;
    }

    // Grid search for the largest certified c1 over small (c2, c3) ladders.
    const double lead_abs = -lead;
    const std::vector<double> c2_ladder = {lead_abs, 2.0 * lead_abs, 4.0 * lead_abs};
    double coeff_sum = 0.0;
    for (double c : drift.coeffs()) coeff_sum += std::abs(c);
    const std::vector<double> c3_ladder = {0.0, 1.0, 1.0 + coeff_sum};

    struct Candidate {
        double c1 = -1e300;
        double c2 = 0.0, c3 = 0.0;
        double worst_alpha = 0.0, worst_beta = 0.0;
    };
    std::vector<Candidate> cands;
    for (double c2 : c2_ladder)
        for (double c3 : c3_ladder) cands.push_back({1e300, c2, c3, 0.0, 0.0});

    const double h = 2.0 * box / static_cast<double>(grid_steps - 1);
    for (int i = 0; i < grid_steps; ++i) {
        const double alpha = -box + h * static_cast<double>(i);
        if (alpha == 0.0) continue;
        const double sgn = alpha > 0.0 ? 1.0 : -1.0;
        const double a_pow = std::pow(std::abs(alpha), 1.0 + epsilon);
        for (int j = 0; j < grid_steps; ++j) {
            const double beta = -box + h * static_cast<double>(j);
            const double lhs = drift.eval(alpha + beta) * sgn;
            const double b_pow = std::pow(std::abs(beta), s);
            for (auto& c : cands) {
                const double c1_here = (c.c2 * b_pow + c.c3 - lhs) / a_pow;
                if (c1_here < c.c1) {
                    c.c1 = c1_here;
                    c.worst_alpha = alpha;
                    c.worst_beta = beta;
                }
            }
        }
    }

    // Leading-order tail certificate: superlinear exponent must not exceed the
    // degree, the perturbation exponent must absorb it, and c1 may not exceed
    // the homogeneous floor of the leading term.
    const bool tail_ok = (1.0 + epsilon <= static_cast<double>(p) + 1e-12) &&
                         (s >= static_cast<double>(p) - 1e-12);

    Candidate best;
    bool found = false;
    for (const auto& c : cands) {
        double c1 = c.c1;
        if (tail_ok) c1 = std::min(c1, homogeneous_floor(lead_abs, c.c2, p) * (1.0 - 1e-9));
        if (c1 > 0.0 && (!found || c1 > best.c1 + 1e-15)) {
            best = c;
            best.c1 = c1;
            found = true;
        }
    }

    if (found && tail_ok) {
        v.passed = true;
        v.margin = best.c1;
        v.witness = {{"c1", best.c1}, {"c2", best.c2}, {"c3", best.c3},
                     {"epsilon", epsilon}, {"s", s}};
        v.detail = "grid search on [-" + fmt(box) + "," + fmt(box) + "]^2 (" +
                   std::to_string(grid_steps) + " steps) + leading-term certificate";
        return v;
    }

    v.passed = false;
    if (!tail_ok) {
        // The bounded grid may look feasible; the tail cannot. Produce a
        // concrete violation of the best grid candidate beyond the box.
        Candidate probe = cands.back();
        for (const auto& c : cands)
            if (c.c1 > probe.c1) probe = c;
        const double c1 = std::max(probe.c1, 1e-6);
        for (double r = 2.0 * box; r <= box * 4096.0; r *= 2.0) {
            const double along_alpha = c1 * std::pow(r, 1.0 + epsilon) - probe.c3 - drift.eval(r);
            if (along_alpha < 0.0) {
                v.counterexample = {{r, 0.0}};
                break;
            }
            const double lhs = drift.eval(1.0 - r);  // alpha = 1, beta = -r
            if (lhs > -c1 + probe.c2 * std::pow(r, s) + probe.c3) {
                v.counterexample = {{1.0, -r}};
                break;
            }
        }
        v.margin = (1.0 + epsilon > static_cast<double>(p))
                       ? static_cast<double>(p) - (1.0 + epsilon)
                       : s - static_cast<double>(p);
        v.detail = (1.0 + epsilon > static_cast<double>(p))
                       ? "drift degree " + std::to_string(p) + " cannot certify growth exponent 1+epsilon = " + fmt(1.0 + epsilon)
                       : "perturbation exponent s = " + fmt(s) + " below drift degree " + std::to_string(p);
        return v;
    }

    // Grid infeasible for every ladder combination.
    Candidate worst = cands.back();
    for (const auto& c : cands)
        if (c.c1 > worst.c1) worst = c;
    v.margin = std::min(worst.c1, 0.0);
    v.counterexample = {{worst.worst_alpha, worst.worst_beta}};
    v.detail = "no positive c1 feasible on the search grid";
    return v;
}

Verdict check_series_e6(const ModelSpec& spec, double gamma_series, int d) {
    if (!(gamma_series > 0.0 && gamma_series < 1.0))
        throw std::invalid_argument("check_series_e6: gamma_series must lie in (0,1)");
    if (d < 1 || d > 3) throw std::invalid_argument("check_series_e6: d must be 1, 2 or 3");

    Verdict v;
    const CovarianceSpec& cov = spec.covariance();

    if (cov.kind() == CovarianceKind::Explicit) {
        if (d != 1)
            throw std::invalid_argument(
                "check_series_e6: explicit spectra carry no symbolic d-dependence; use d = 1");
        const int n_modes = spec.n_modes();
        auto term = [&](int n) {
            return spec.lambda(n) / std::pow(spec.alpha(n), 1.0 - gamma_series);
        };
        double sum = 0.0;
        for (int n = 1; n <= n_modes; ++n) sum += term(n);
        if (n_modes < 4) {
            v.passed = true;
            v.margin = 1.0;
            v.witness = {{"value", sum}};
            v.detail = "explicit spectrum with < 4 modes: finite-rank sum";
            return v;
        }
        const double growth = std::log2(term(n_modes) / term(n_modes / 2));
        v.margin = -growth - 1.0;
        v.passed = v.margin > kSeriesMarginEps;
        v.witness = {{"value", sum}, {"term_growth_exponent", growth}};
        v.detail = "explicit spectrum: growth heuristic, term ~ n^" + fmt(growth);
        return v;
    }

    const double a_cov = (cov.kind() == CovarianceKind::PowerLaw) ? cov.exponent() : 0.0;
    // λ_n/α_n^(1-γ) ~ n^(-q) with α_n ~ n^(2/d).
    const double q = 2.0 * (a_cov + 1.0 - gamma_series) / static_cast<double>(d);
    v.margin = q - 1.0;
    v.passed = v.margin > kSeriesMarginEps;
    v.witness = {{"series_exponent", q}};
    if (d == 1 && v.passed) {
        double sum = 0.0;
        for (int n = 1; n <= spec.n_modes(); ++n)
            sum += spec.lambda(n) / std::pow(spec.alpha(n), 1.0 - gamma_series);
        const double last = spec.lambda(spec.n_modes()) /
                            std::pow(spec.alpha(spec.n_modes()), 1.0 - gamma_series);
        v.witness.emplace_back("value", sum + last * spec.n_modes() / (q - 1.0));
    }
    v.detail = "series exponent q = 2(a+1-gamma)/d = " + fmt(q) + " (needs q > 1)";
    return v;
}

namespace {

// Positive root of (1+a)(1-e^{-u}) = u; the location 2·α·t of the continuous
// mode envelope's maximum. Only called for a > 0.
double envelope_fixed_point(double a) {
    double u = 1.0 + a;
    for (int i = 0; i < 60; ++i) {
        const double f = u - (1.0 + a) * (-std::expm1(-u));
        const double fp = 1.0 - (1.0 + a) * std::exp(-u);
        const double next = u - f / fp;
        if (std::abs(next - u) < 1e-15 * u) return next;
        u = next;
    }
    return u;
}

// sup_n sqrt(2·α_n/λ_n)·(e^(2·α_n·t)-1)^(-1/2) over truncated modes plus the
// power-law tail relaxation. Stable form: sqrt(2α/λ)·e^(-αt)/sqrt(1-e^(-2αt)).
double e9_integrand(const ModelSpec& spec, double t, double a_cov, double u_star) {
    double best = 0.0;
    for (int n = 1; n <= spec.n_modes(); ++n) {
        const double alpha = spec.alpha(n);
        const double g = std::sqrt(2.0 * alpha / spec.lambda(n)) * std::exp(-alpha * t) /
                         std::sqrt(-std::expm1(-2.0 * alpha * t));
        best = std::max(best, g);
    }
    if (spec.covariance().kind() != CovarianceKind::Explicit && u_star > 0.0) {
        const double c = (spec.covariance().kind() == CovarianceKind::PowerLaw)
                             ? spec.covariance().scale() : 1.0;
        const double x = std::max(u_star / (2.0 * t), spec.alpha(spec.n_modes()));
        const double u = 2.0 * x * t;
        const double g = std::sqrt(2.0 * std::pow(x, 1.0 + a_cov) / c) * std::exp(-0.5 * u) /
                         std::sqrt(-std::expm1(-u));
        best = std::max(best, g);
    }
    return best;
}

} // namespace

Verdict check_smoothing_e9(const ModelSpec& spec, double T, int quad_points) {
    if (!(T > 0.0)) throw std::invalid_argument("check_smoothing_e9: T must be > 0");
    if (quad_points < 9) throw std::invalid_argument("check_smoothing_e9: quad_points must be >= 9");

    const CovarianceSpec& cov = spec.covariance();
    const double a_cov = (cov.kind() == CovarianceKind::PowerLaw) ? cov.exponent() : 0.0;
    const bool truncated_only = cov.kind() == CovarianceKind::Explicit;

    // t→0 envelope: integrand ~ t^(-(1+a)/2) through the power-law tail,
    // t^(-1/2) for a finite-rank spectrum.
    const double s_env = truncated_only ? 0.5 : 0.5 * (1.0 + a_cov);

    Verdict v;
    v.margin = 1.0 - s_env;
    v.passed = v.margin > 0.0;
    v.detail = "t->0 envelope exponent " + fmt(s_env) + " (needs < 1)" +
               (truncated_only ? "; finite-rank spectrum is always integrable" : "");
    if (!v.passed) {
        v.witness = {{"envelope_exponent", s_env}};
        return v;
    }

    // Integral value: substitute t = tau^m so the integrand vanishes at 0,
    // then composite Simpson with refinement until 1e-6 relative agreement.
    const double u_star = (!truncated_only && a_cov > 0.0) ? envelope_fixed_point(a_cov) : 0.0;
    const int m_pow = std::max(2, static_cast<int>(std::ceil(1.0 / (1.0 - s_env))) + 1);
    const double m = static_cast<double>(m_pow);
    const double tau_end = std::pow(T, 1.0 / m);
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        const double t = std::pow(tau, m);
        return e9_integrand(spec, t, a_cov, u_star) * m * std::pow(tau, m - 1.0);
    };
    auto simpson = [&](int intervals) {
        const double h = tau_end / intervals;
        double acc = g(0.0) + g(tau_end);
        for (int i = 1; i < intervals; ++i) acc += g(h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
        return acc * h / 3.0;
    };

    int intervals = quad_points - 1;
    if (intervals % 2 == 1) ++intervals;
    double value = simpson(intervals);
    double delta = 1.0;
    for (int round = 0; round < 12; ++round) {
        intervals *= 2;
        const double next = simpson(intervals);
        delta = std::abs(next - value) / std::max(std::abs(next), 1e-300);
        value = next;
        if (delta <= 1e-6) break;
    }
    v.witness = {{"integral", value}, {"envelope_exponent", s_env}, {"refinement_delta", delta}};
    return v;
}

Verdict check_powerlaw_window(int d, double a, double b) {
    if (d < 1 || d > 3) throw std::invalid_argument("check_powerlaw_window: d must be 1, 2 or 3");
    if (b < 0.0 || a < 0.0)
        throw std::invalid_argument("check_powerlaw_window: exponents must be >= 0");
    if (b > a)
        throw std::invalid_argument(
            "check_powerlaw_window: malformed window, needs b <= a (lower decay exponent first)");

    Verdict v;
    const double lower = b - (static_cast<double>(d) / 2.0 - 1.0);
    const double upper = 1.0 - a;
    v.margin = std::min(lower, upper);
    v.passed = lower > 0.0 && upper > 0.0;
    v.witness = {{"b_minus_boundary", lower}, {"one_minus_a", upper}};
    v.detail = "window d/2-1 < b <= a < 1 with d = " + std::to_string(d);
    return v;
}

bool HypothesisReport::all_passed() const {
    for (const auto& e : entries)
        if (!e.verdict.passed) return false;
    return true;
}

HypothesisReport check_all(const ModelSpec& spec, const CheckParams& params) {
    HypothesisReport report;
    auto add = [&](const std::string& hyp, const std::string& checker, auto&& fn) {
        HypothesisEntry e{hyp, checker, {}};
        try {
            e.verdict = fn();
        } catch (const std::exception& ex) {
            e.verdict.passed = false;
            e.verdict.margin = 0.0;
            e.verdict.detail = std::string("error: ") + ex.what();
        }
        report.entries.push_back(std::move(e));
    };

    add("H1.1 semigroup + HS integrability", "check_hs_integrability",
        [&] { return check_hs_integrability(spec, params.alpha_exp, params.hs_T); });
    add("H1.2 stochastic convolution regularity", "check_series_e6",
        [&] { return check_series_e6(spec, params.gamma_series, params.d); });
    add("H1.3 drift dissipativity", "check_drift_dissipativity",
        [&] { return check_drift_dissipativity(spec.drift(), params.epsilon, params.s,
                                               params.box, params.grid_steps); });
    add("H1.5 strong Feller (kernel smoothing)", "check_smoothing_e9",
        [&] { return check_smoothing_e9(spec, params.e9_T, params.quad_points); });
    add("H1.5 topological irreducibility", "dimension_bound", [&] {
        Verdict v;
        v.passed = params.d <= 3;
        v.margin = static_cast<double>(3 - params.d) + 1.0;
        v.detail = "Green-kernel bound t^(-d/4) integrable for d <= 3; Q > 0 by construction";
        return v;
    });
    if (spec.covariance().kind() != CovarianceKind::Explicit) {
        const double a_def =
            (spec.covariance().kind() == CovarianceKind::PowerLaw) ? spec.covariance().exponent() : 0.0;
        const double a = params.window_a.value_or(a_def);
        const double b = params.window_b.value_or(a_def);
        add("power-law applicability window", "check_powerlaw_window",
            [&] { return check_powerlaw_window(params.d, a, b); });
    }
    return report;
}

} // namespace ergo
