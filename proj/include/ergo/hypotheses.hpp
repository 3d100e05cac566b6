#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergo/model.hpp"

namespace ergo {

/// Outcome of one hypothesis check. margin is the signed distance to the
/// pass/fail boundary in the check's natural scale (series exponents for
/// convergence tests, the certified c1 for dissipativity). A failed check
/// carries either a nonpositive margin or a concrete counterexample point.
struct Verdict {
    bool passed = false;
    double margin = 0.0;
    std::vector<std::pair<std::string, double>> witness;
    std::optional<std::vector<double>> counterexample;
    std::string detail;
};

struct DissipativityConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double epsilon = 0.0;
    double s = 0.0;
};

/// Hilbert-Schmidt integrability of t^(-alpha_exp)·||S(t)Q^(1/2)||_HS² near 0:
/// per-mode envelope λ_n·Γ(1-alpha_exp)·(2α_n)^(alpha_exp-1) summed over the
/// truncation plus a tail convergence test from the covariance law.
/// alpha_exp must lie in (0,1).
Verdict check_hs_integrability(const ModelSpec& spec, double alpha_exp, double T);

/// Searches for constants with f(α+β)·sgn(α) <= -c1|α|^(1+epsilon)+c2|β|^s+c3
/// on [-box,box]² and certifies the leading-order tail from the polynomial's
/// degree and leading coefficient. Witness carries (c1,c2,c3,epsilon,s).
Verdict check_drift_dissipativity(const DriftPolynomial& drift, double epsilon, double s,
                                  double box = 10.0, int grid_steps = 2001);

/// Convergence of Σ λ_n/α_n^(1-gamma_series) with α_n ≍ n^(2/d):
/// closed-form exponent comparison for identity/power-law spectra, a
/// partial-sum growth heuristic for explicit ones (d = 1 only).
Verdict check_series_e6(const ModelSpec& spec, double gamma_series, int d);

/// Integrability over (0,T) of ||Q_t^(-1/2)S(t)|| in the diagonal case,
///   sup_n sqrt(2α_n/λ_n)·(e^(2α_n t)-1)^(-1/2),
/// with the supremum over the truncated modes plus the power-law continuous
/// relaxation of the tail. Decision from the analytic t→0 envelope exponent
/// (1+a)/2; the integral value is computed by refined quadrature on pass.
Verdict check_smoothing_e9(const ModelSpec& spec, double T, int quad_points = 513);

/// Applicability window for power-law spectra K1·n^(-2a/d) <= λ_n <= K2·n^(-2b/d):
/// passes iff d/2 - 1 < b <= a < 1. Throws when b > a (malformed input).
Verdict check_powerlaw_window(int d, double a, double b);

struct CheckParams {
    double alpha_exp = 0.25;
    double hs_T = 1.0;
    double epsilon = 2.0;
    double s = 3.0;
    double box = 10.0;
    int grid_steps = 2001;
    double gamma_series = 0.25;
    double e9_T = 1.0;
    int quad_points = 513;
    int d = 1;
    std::optional<double> window_a;  // override for the symbolic window check
    std::optional<double> window_b;
};

struct HypothesisEntry {
    std::string hypothesis;
    std::string checker;
    Verdict verdict;
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    bool all_passed() const;
};

/// Runs every checker applicable to the model; a checker that throws becomes
/// a failed entry carrying the error text.
HypothesisReport check_all(const ModelSpec& spec, const CheckParams& params);

} // namespace ergo
