#include "doctest.h"

#include <cmath>

#include "ergo/model.hpp"
#include "ergo/rng.hpp"

using namespace ergo;

namespace {

ModelSpec default_cubic(int n_modes = 64, double length = M_PI, int n_colloc = 0) {
    if (n_colloc == 0) n_colloc = 4 * n_modes;
    return ModelSpec(length, n_modes, n_colloc, DriftPolynomial::cubic(),
                     CovarianceSpec::identity());
}

SpectralField random_field(Rng& rng, int n_modes, double scale) {
    SpectralField f(static_cast<std::size_t>(n_modes));
    for (auto& c : f.coeffs) c = scale * rng.next_gaussian();
    return f;
}

} // namespace

TEST_CASE("dirichlet eigenvalues") {
    CHECK(dirichlet_eigenvalue(1, M_PI) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dirichlet_eigenvalue(3, M_PI) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(dirichlet_eigenvalue(1, 1.0) == doctest::Approx(9.869604401089358).epsilon(1e-15));
    for (int n = 1; n < 40; ++n) {
        CHECK(dirichlet_eigenvalue(n + 1, 2.7) > dirichlet_eigenvalue(n, 2.7));
    }
    CHECK_THROWS_AS(dirichlet_eigenvalue(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_eigenvalue(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_eigenvalue(1, -2.0), std::invalid_argument);
}

TEST_CASE("model construction invariants") {
    CHECK_THROWS_AS(ModelSpec(M_PI, 4, 7, DriftPolynomial::cubic(), CovarianceSpec::identity()),
                    std::invalid_argument);  // M < 2N
    CHECK_THROWS_AS(ModelSpec(M_PI, 0, 8, DriftPolynomial::cubic(), CovarianceSpec::identity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ModelSpec(-1.0, 4, 8, DriftPolynomial::cubic(), CovarianceSpec::identity()),
                    std::invalid_argument);

    ModelSpec spec = default_cubic(16);
    for (int n = 1; n < spec.n_modes(); ++n) {
        CHECK(spec.alpha(n + 1) > spec.alpha(n));
        CHECK(spec.lambda(n) > 0.0);
    }
}

TEST_CASE("to_physical on a single mode matches e_1 pointwise") {
    ModelSpec spec(M_PI, 1, 3, DriftPolynomial::zero(), CovarianceSpec::identity());
    auto g = spec.to_physical(SpectralField::single_mode(1, 1, 1.0));
    const double amp = std::sqrt(2.0 / M_PI);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == doctest::Approx(amp * std::sin(M_PI / 4.0)).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(amp).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(amp * std::sin(3.0 * M_PI / 4.0)).epsilon(1e-14));

    auto zero = spec.to_physical(SpectralField(1));
    for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("transform round-trip is exact for band-limited fields") {
    ModelSpec spec = default_cubic(32, 2.5);
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        SpectralField u = random_field(rng, 32, 3.0);
        SpectralField back = spec.to_spectral(spec.to_physical(u));
        for (std::size_t k = 0; k < u.size(); ++k) {
            CHECK(std::abs(back.coeffs[k] - u.coeffs[k]) <= 1e-12);
        }
    }
}

TEST_CASE("to_spectral picks out pure modes") {
    ModelSpec spec = default_cubic(8);
    auto grid = spec.to_physical(SpectralField::single_mode(8, 2, 1.0));
    SpectralField u = spec.to_spectral(grid);
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(std::abs(u.coeffs[k] - (k == 1 ? 1.0 : 0.0)) <= 1e-12);
    }

    std::vector<double> zeros(static_cast<std::size_t>(spec.n_colloc()), 0.0);
    SpectralField z = spec.to_spectral(zeros);
    for (double v : z.coeffs) CHECK(v == 0.0);

    CHECK_THROWS_AS(spec.to_spectral(std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("aliasing guard: cube analysed at M = 2N matches dense quadrature") {
    const int n = 8;
    ModelSpec coarse(M_PI, n, 2 * n, DriftPolynomial::cubic(), CovarianceSpec::identity());
    ModelSpec dense(M_PI, n, 16 * n, DriftPolynomial::cubic(), CovarianceSpec::identity());

    auto cube_project = [](const ModelSpec& s) {
        auto g = s.to_physical(SpectralField::single_mode(static_cast<std::size_t>(s.n_modes()), 1, 1.0));
        for (double& v : g) v = v * v * v;
        return s.to_spectral(g);
    };
    SpectralField a = cube_project(coarse);
    SpectralField b = cube_project(dense);
    double norm = 0.0;
    for (double v : b.coeffs) norm = std::max(norm, std::abs(v));
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(std::abs(a.coeffs[k] - b.coeffs[k]) / norm <= 1e-10);
    }
}

TEST_CASE("apply_drift: linear drift acts diagonally") {
    ModelSpec spec(M_PI, 16, 64, DriftPolynomial({0.0, -1.0}), CovarianceSpec::identity());
    Rng rng(3);
    SpectralField u = random_field(rng, 16, 2.0);
    SpectralField f = spec.apply_drift(u);
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(std::abs(f.coeffs[k] + u.coeffs[k]) <= 1e-12);
    }
}

TEST_CASE("apply_drift: cubic single-mode closed form") {
    // -u^3 on eps·e_1: F_1 = -3 eps^3/(2L), F_3 = eps^3/(2L), all others 0.
    const double eps = 0.1;
    const double L = M_PI;
    ModelSpec spec(L, 8, 32, DriftPolynomial::cubic(), CovarianceSpec::identity());
    SpectralField f = spec.apply_drift(SpectralField::single_mode(8, 1, eps));
    const double e3 = eps * eps * eps;
    CHECK(f.coeffs[0] == doctest::Approx(-3.0 * e3 / (2.0 * L)).epsilon(1e-12));
    CHECK(f.coeffs[2] == doctest::Approx(e3 / (2.0 * L)).epsilon(1e-12));
    for (std::size_t k : {1u, 3u, 4u, 5u, 6u, 7u}) {
        CHECK(std::abs(f.coeffs[k]) <= 1e-15);
    }

    // Same result from a dense quadrature oracle at M = 16N.
    ModelSpec dense(L, 8, 16 * 8, DriftPolynomial::cubic(), CovarianceSpec::identity());
    SpectralField fd = dense.apply_drift(SpectralField::single_mode(8, 1, eps));
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(std::abs(f.coeffs[k] - fd.coeffs[k]) <= 1e-13);
    }

    SpectralField zero = spec.apply_drift(SpectralField(8));
    for (double v : zero.coeffs) CHECK(v == 0.0);
}

TEST_CASE("apply_drift: constant term is projected analytically") {
    // f(u) = 0.5: F_n = 0.5·<1, e_n>, zero for even modes.
    ModelSpec spec(M_PI, 4, 16, DriftPolynomial({0.5}), CovarianceSpec::identity());
    SpectralField f = spec.apply_drift(SpectralField(4));
    CHECK(f.coeffs[0] == doctest::Approx(0.5 * 1.5957691216057308).epsilon(1e-14));
    CHECK(f.coeffs[1] == 0.0);
    CHECK(f.coeffs[2] == doctest::Approx(0.5 * 1.5957691216057308 / 3.0).epsilon(1e-14));
    CHECK(f.coeffs[3] == 0.0);
}

TEST_CASE("norms of the first eigenmode") {
    ModelSpec spec = default_cubic(64);
    SpectralField u = SpectralField::single_mode(64, 1, 1.0);
    Norms n = spec.norms(u, 0.75);
    CHECK(n.l2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.sup == doctest::Approx(0.7978845608028654).epsilon(1e-4));
    CHECK(n.sup <= 0.7978845608028654 + 1e-12);  // grid max never exceeds the true sup
    CHECK(n.sobolev == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(spec.sobolev_norm(u, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(spec.sobolev_norm(u, 0.0), std::invalid_argument);
}

TEST_CASE("sup-norm is dominated by the sobolev embedding constant") {
    ModelSpec spec = default_cubic(32);
    const double theta = 0.75;
    const double c = spec.sup_embedding_constant(theta);
    CHECK(c > 0.0);
    Rng rng(11);
    for (int rep = 0; rep < 1000; ++rep) {
        SpectralField u = random_field(rng, 32, 5.0);
        Norms n = spec.norms(u, theta);
        CHECK(n.sup <= c * n.sobolev * (1.0 + 1e-12) + 1e-12);
    }
}
