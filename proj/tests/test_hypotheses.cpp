#include "doctest.h"

#include <cmath>
#include <functional>

#include "ergo/hypotheses.hpp"
#include "ergo/model.hpp"

using namespace ergo;

namespace {

ModelSpec make_spec(CovarianceSpec cov, DriftPolynomial drift = DriftPolynomial::cubic(),
                    int n_modes = 64) {
    return ModelSpec(M_PI, n_modes, 4 * n_modes, std::move(drift), std::move(cov));
}

double witness_value(const Verdict& v, const std::string& key) {
    for (const auto& [k, val] : v.witness)
        if (k == key) return val;
    FAIL("missing witness key: " << key);
    return 0.0;
}

// Test-side adaptive Simpson on [a,b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 0) {
    const double m = 0.5 * (a + b);
    auto simp = [&](double x0, double x1) {
        return (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
    };
    const double whole = simp(a, b);
    const double split = simp(a, m) + simp(m, b);
    if (depth > 40 || std::abs(whole - split) < 15.0 * tol) return split + (split - whole) / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth + 1) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth + 1);
}

} // namespace

TEST_CASE("hs integrability: identity passes at alpha_exp = 0.25") {
    ModelSpec spec = make_spec(CovarianceSpec::identity());
    Verdict v = check_hs_integrability(spec, 0.25, 1.0);
    CHECK(v.passed);
    CHECK(v.margin == doctest::Approx(0.5).epsilon(1e-12));  // q = 2(1-0.25) = 1.5
    CHECK(witness_value(v, "value") > 0.0);
}

TEST_CASE("hs integrability: power law dominates identity's margin") {
    ModelSpec ident = make_spec(CovarianceSpec::identity());
    ModelSpec pl = make_spec(CovarianceSpec::power_law(1.0, 0.5));
    Verdict vi = check_hs_integrability(ident, 0.25, 1.0);
    Verdict vp = check_hs_integrability(pl, 0.25, 1.0);
    CHECK(vp.passed);
    CHECK(vp.margin > vi.margin);
}

TEST_CASE("hs integrability: growing explicit spectrum diverges") {
    std::vector<double> grow;
    for (int n = 1; n <= 64; ++n) grow.push_back(dirichlet_eigenvalue(n, M_PI));
    ModelSpec spec = make_spec(CovarianceSpec::explicit_values(grow));
    Verdict v = check_hs_integrability(spec, 0.999, 1.0);
    CHECK_FALSE(v.passed);
    CHECK(v.margin < 0.0);
    CHECK_THROWS_AS(check_hs_integrability(spec, 1.2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(check_hs_integrability(spec, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("dissipativity: cubic drift certifies constants; (0.4, 4, 0) feasible") {
    Verdict v = check_drift_dissipativity(DriftPolynomial::cubic(), 2.0, 3.0);
    REQUIRE(v.passed);
    const double c1 = witness_value(v, "c1");
    CHECK(c1 >= 0.4);

    // Independent grid oracle: f(a+b)·sgn(a) <= -0.4|a|^3 + 4|b|^3 + 0 on
    // [-10,10]^2 at step 0.01.
    bool ok = true;
    for (int i = 0; i <= 2000 && ok; ++i) {
        const double a = -10.0 + 0.01 * i;
        if (a == 0.0) continue;
        const double sgn = a > 0.0 ? 1.0 : -1.0;
        for (int j = 0; j <= 2000; ++j) {
            const double b = -10.0 + 0.01 * j;
            const double u = a + b;
            const double lhs = -u * u * u * sgn;
            if (lhs > -0.4 * std::abs(a * a * a) + 4.0 * std::abs(b * b * b) + 1e-9) {
                ok = false;
                break;
            }
        }
    }
    CHECK(ok);

    // Scalar minimisation oracle: min_t (1-t)^3 + 4t^3 = 4/9 > 0.4.
    double lo = 0.0, hi = 1.0;
    auto phi = [](double t) { return std::pow(1.0 - t, 3) + 4.0 * t * t * t; };
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        (phi(m1) < phi(m2) ? hi : lo) = (phi(m1) < phi(m2) ? m2 : m1);
    }
    const double tmin = 0.5 * (lo + hi);
    CHECK(phi(tmin) == doctest::Approx(4.0 / 9.0).epsilon(1e-9));
    CHECK(phi(tmin) > 0.4);
    CHECK(c1 <= 4.0 / 9.0 + 1e-9);  // certificate never exceeds the homogeneous floor
}

TEST_CASE("dissipativity: wrong-sign cubic fails with a large-alpha counterexample") {
    Verdict v = check_drift_dissipativity(DriftPolynomial({0.0, 0.0, 0.0, 1.0}), 2.0, 3.0);
    CHECK_FALSE(v.passed);
    REQUIRE(v.counterexample.has_value());
    CHECK((*v.counterexample)[0] > 0.0);
}

TEST_CASE("dissipativity: linear drift cannot carry epsilon = 1") {
    Verdict v = check_drift_dissipativity(DriftPolynomial({0.0, -1.0}), 1.0, 3.0);
    CHECK_FALSE(v.passed);
    CHECK((v.margin <= 0.0 || v.counterexample.has_value()));
}

TEST_CASE("dissipativity: grid certificate survives a 10x finer grid") {
    for (const auto& drift :
         {DriftPolynomial::cubic(), DriftPolynomial({0.3, 1.0, 0.0, 0.0, 0.0, -0.5})}) {
        Verdict v = check_drift_dissipativity(drift, 2.0, 5.0, 10.0, 201);
        REQUIRE(v.passed);
        const double c1 = witness_value(v, "c1");
        const double c2 = witness_value(v, "c2");
        const double c3 = witness_value(v, "c3");
        double worst = 1e300;
        for (int i = 0; i <= 2000; ++i) {
            const double a = -10.0 + 0.01 * i;
            if (a == 0.0) continue;
            const double sgn = a > 0.0 ? 1.0 : -1.0;
            for (int j = 0; j <= 2000; ++j) {
                const double b = -10.0 + 0.01 * j;
                const double slack = -c1 * std::pow(std::abs(a), 3.0) +
                                     c2 * std::pow(std::abs(b), 5.0) + c3 -
                                     drift.eval(a + b) * sgn;
                worst = std::min(worst, slack);
            }
        }
        CHECK(worst >= -1e-9);
    }
}

TEST_CASE("series e6: exponent comparison across dimensions") {
    ModelSpec ident = make_spec(CovarianceSpec::identity());
    Verdict v1 = check_series_e6(ident, 0.25, 1);
    CHECK(v1.passed);
    CHECK(v1.margin == doctest::Approx(0.5).epsilon(1e-12));

    ModelSpec pl04 = make_spec(CovarianceSpec::power_law(1.0, 0.4));
    Verdict v2 = check_series_e6(pl04, 0.05, 3);
    CHECK_FALSE(v2.passed);  // needs b > d/2 - 1 = 0.5

    ModelSpec pl02 = make_spec(CovarianceSpec::power_law(1.0, 0.2));
    Verdict v3 = check_series_e6(pl02, 0.01, 2);
    CHECK(v3.passed);
    CHECK(v3.margin == doctest::Approx(2.0 * (0.2 + 1.0 - 0.01) / 2.0 - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(check_series_e6(ident, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_series_e6(ident, 1.0, 1), std::invalid_argument);
}

TEST_CASE("series e6: explicit spectra use the growth heuristic (d = 1 only)") {
    std::vector<double> decay;
    for (int n = 1; n <= 64; ++n) decay.push_back(1.0 / (n * n));
    ModelSpec spec = make_spec(CovarianceSpec::explicit_values(decay));
    Verdict v = check_series_e6(spec, 0.25, 1);
    CHECK(v.passed);
    CHECK_THROWS_AS(check_series_e6(spec, 0.25, 2), std::invalid_argument);

    std::vector<double> grow;
    for (int n = 1; n <= 64; ++n) grow.push_back(dirichlet_eigenvalue(n, M_PI));
    ModelSpec bad = make_spec(CovarianceSpec::explicit_values(grow));
    CHECK_FALSE(check_series_e6(bad, 0.25, 1).passed);
}

TEST_CASE("smoothing e9: power-law pass/fail straddles a = 1") {
    Verdict ok = check_smoothing_e9(make_spec(CovarianceSpec::power_law(1.0, 0.5)), 1.0);
    CHECK(ok.passed);
    CHECK(ok.margin == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(witness_value(ok, "integral") > 0.0);

    Verdict bad = check_smoothing_e9(make_spec(CovarianceSpec::power_law(1.0, 1.5)), 1.0);
    CHECK_FALSE(bad.passed);
    CHECK(bad.margin == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("smoothing e9: single-mode integral against adaptive quadrature oracle") {
    ModelSpec spec(M_PI, 1, 4, DriftPolynomial::cubic(),
                   CovarianceSpec::explicit_values({1.0}));  // alpha_1 = lambda_1 = 1
    Verdict v = check_smoothing_e9(spec, 1.0);
    REQUIRE(v.passed);
    const double got = witness_value(v, "integral");

    // Oracle: substitute t = tau^2 so the integrand is bounded, then adaptive
    // Simpson. Integrand: sqrt(2)·(e^(2t)-1)^(-1/2).
    auto g = [](double tau) {
        if (tau == 0.0) return 2.0;  // limit of sqrt(2)/sqrt(e^(2 tau^2)-1)·2 tau
        const double t = tau * tau;
        return std::sqrt(2.0) / std::sqrt(std::expm1(2.0 * t)) * 2.0 * tau;
    };
    const double oracle = adaptive_simpson(g, 0.0, 1.0, 1e-10);
    CHECK(oracle == doctest::Approx(1.6886683178625).epsilon(1e-6));
    CHECK(got == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("power-law window") {
    CHECK(check_powerlaw_window(1, 0.5, 0.5).passed);
    CHECK(check_powerlaw_window(3, 0.9, 0.6).passed);
    CHECK_FALSE(check_powerlaw_window(3, 1.0, 0.6).passed);
    CHECK_THROWS_AS(check_powerlaw_window(1, 0.3, 0.6), std::invalid_argument);  // b > a
    CHECK_THROWS_AS(check_powerlaw_window(4, 0.5, 0.5), std::invalid_argument);

    Verdict v = check_powerlaw_window(3, 0.9, 0.6);
    CHECK(v.margin == doctest::Approx(std::min(0.6 - 0.5, 1.0 - 0.9)).epsilon(1e-12));
}

TEST_CASE("margins move monotonically along nested power laws") {
    // Larger lambda pointwise (smaller decay exponent a) makes the HS integral
    // larger, so its margin shrinks, and makes Q_t^(-1/2) smaller, so the
    // smoothing margin grows.
    double prev_hs = -1e300, prev_e9 = 1e300;
    for (double a : {0.2, 0.5, 0.8}) {
        ModelSpec spec = make_spec(CovarianceSpec::power_law(1.0, a));
        const double hs = check_hs_integrability(spec, 0.25, 1.0).margin;
        const double e9 = check_smoothing_e9(spec, 1.0).margin;
        CHECK(hs > prev_hs);   // smaller lambda (larger a) => larger hs margin
        CHECK(e9 < prev_e9);   // smaller lambda (larger a) => smaller e9 margin
        prev_hs = hs;
        prev_e9 = e9;
    }
}

TEST_CASE("window pass implies e6 and e9 pass (d = 1 grid)") {
    int checked = 0;
    for (double a = 0.1; a < 1.0; a += 0.2) {
        for (double b = 0.1; b <= a + 1e-12; b += 0.25) {
            Verdict w = check_powerlaw_window(1, a, b);
            if (!w.passed) continue;
            const double gamma = 0.5 * (b + 0.5);
            CHECK(check_series_e6(make_spec(CovarianceSpec::power_law(1.0, b)), gamma, 1).passed);
            CHECK(check_smoothing_e9(make_spec(CovarianceSpec::power_law(1.0, a)), 1.0).passed);
            ++checked;
        }
    }
    CHECK(checked >= 10);
}

TEST_CASE("check_all: the canonical example passes everything") {
    ModelSpec spec = make_spec(CovarianceSpec::identity());
    HypothesisReport r = check_all(spec, CheckParams{});
    CHECK(r.all_passed());
    CHECK(r.entries.size() >= 5);
}

TEST_CASE("check_all: sign-flipped drift fails only the dissipativity entry") {
    ModelSpec spec = make_spec(CovarianceSpec::identity(), DriftPolynomial({0.0, 0.0, 0.0, 1.0}));
    HypothesisReport r = check_all(spec, CheckParams{});
    CHECK_FALSE(r.all_passed());
    for (const auto& e : r.entries) {
        if (e.checker == "check_drift_dissipativity") {
            CHECK_FALSE(e.verdict.passed);
        } else {
            CHECK(e.verdict.passed);
        }
    }
}

TEST_CASE("check_all: steep power law fails the smoothing entry") {
    ModelSpec spec = make_spec(CovarianceSpec::power_law(1.0, 1.2));
    HypothesisReport r = check_all(spec, CheckParams{});
    bool e9_failed = false;
    for (const auto& e : r.entries) {
        if (e.checker == "check_smoothing_e9") e9_failed = !e.verdict.passed;
    }
    CHECK(e9_failed);
}
