#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergo {

/// Eigenvalue of -d²/dξ² on (0,L) with Dirichlet boundary: α_n = (nπ/L)².
/// Strictly increasing in n. Throws on n < 1 or L <= 0.
double dirichlet_eigenvalue(int n, double length);

/// Polynomial drift f(u) = Σ_k coeffs[k]·u^k, constant term first.
/// The dissipative shape the ergodicity theory needs (odd degree > 1,
/// negative leading coefficient) is *checked*, not enforced here: zero,
/// linear and sign-flipped drifts are legitimate operands for contrast
/// experiments and for failing hypothesis checks.
class DriftPolynomial {
public:
    DriftPolynomial() = default;
    explicit DriftPolynomial(std::vector<double> coeffs);

    static DriftPolynomial zero() { return DriftPolynomial(std::vector<double>{}); }
    /// f(u) = -u^3, the canonical example drift.
    static DriftPolynomial cubic() { return DriftPolynomial({0.0, 0.0, 0.0, -1.0}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    int degree() const;            // -1 for the zero polynomial
    double leading_coefficient() const;  // 0 for the zero polynomial
    double constant_term() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
    bool is_zero() const { return degree() < 0; }

    /// True iff the polynomial satisfies the structural shape required of a
    /// dissipative reaction term: odd degree > 1 and negative leading coeff.
    bool dissipative_shape() const;

    double eval(double u) const;
    /// f(u) - f(0): the part that vanishes at zero.
    double eval_centered(double u) const { return eval(u) - constant_term(); }
    /// f'(u); used for stiffness estimates.
    double eval_derivative(double u) const;

private:
    std::vector<double> coeffs_;  // trailing zeros stripped at construction
};

enum class CovarianceKind { Identity, PowerLaw, Explicit };

/// Diagonal covariance: Q e_n = λ_n e_n with λ_n > 0.
///  identity      λ_n = 1
///  power_law     λ_n = scale·α_n^(-exponent), exponent >= 0, scale > 0
///  explicit      user list λ_1..λ_N
class CovarianceSpec {
public:
    CovarianceSpec() : kind_(CovarianceKind::Identity) {}

    static CovarianceSpec identity();
    static CovarianceSpec power_law(double scale, double exponent);
    static CovarianceSpec explicit_values(std::vector<double> values);

    CovarianceKind kind() const { return kind_; }
    double scale() const { return scale_; }
    double exponent() const { return exponent_; }
    const std::vector<double>& values() const { return values_; }

    /// λ_n given the matching Dirichlet eigenvalue α_n. 1-based n.
    double eigenvalue(int n, double alpha_n) const;

private:
    CovarianceKind kind_;
    double scale_ = 1.0;
    double exponent_ = 0.0;
    std::vector<double> values_;
};

/// State vector in the Dirichlet eigenbasis; coeffs[n-1] multiplies e_n.
struct SpectralField {
    std::vector<double> coeffs;

    SpectralField() = default;
    explicit SpectralField(std::size_t n_modes) : coeffs(n_modes, 0.0) {}
    static SpectralField single_mode(std::size_t n_modes, std::size_t mode, double value);

    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }
};

struct Norms {
    double l2;       // sqrt(Σ u_n²), the H-norm of the truncated field
    double sup;      // max |u(ξ_j)| over the collocation grid (E-norm proxy)
    double sobolev;  // sqrt(Σ α_n^θ u_n²)
};

/// The discretized problem: domain (0,L), Galerkin truncation N, collocation
/// grid of M interior points ξ_j = jL/(M+1), drift polynomial and diagonal
/// covariance. Immutable after construction; all operations are pure, so a
/// single instance is safe to share across threads.
class ModelSpec {
public:
    ModelSpec(double length, int n_modes, int n_colloc,
              DriftPolynomial drift, CovarianceSpec covariance);

    double length() const { return length_; }
    int n_modes() const { return n_modes_; }
    int n_colloc() const { return n_colloc_; }
    const DriftPolynomial& drift() const { return drift_; }
    const CovarianceSpec& covariance() const { return covariance_; }

    double alpha(int n) const { return alpha_[static_cast<std::size_t>(n - 1)]; }
    double lambda(int n) const { return lambda_[static_cast<std::size_t>(n - 1)]; }
    const std::vector<double>& alphas() const { return alpha_; }
    const std::vector<double>& lambdas() const { return lambda_; }
    const std::vector<double>& grid() const { return grid_; }

    /// Collocation values of the band-limited field: g_j = Σ_n u_n e_n(ξ_j).
    void to_physical(const SpectralField& field, std::vector<double>& grid_values) const;
    std::vector<double> to_physical(const SpectralField& field) const;

    /// Discrete sine analysis, u_m = (L/(M+1))·Σ_j g_j e_m(ξ_j); exact inverse
    /// of to_physical for fields band-limited to M modes.
    void to_spectral(const std::vector<double>& grid_values, SpectralField& field) const;
    SpectralField to_spectral(const std::vector<double>& grid_values) const;

    /// Galerkin drift: project f applied pointwise, F_n = ⟨f(u(·)), e_n⟩.
    /// The constant term of f is projected analytically (its sine series is
    /// known in closed form); the centered part goes through the grid.
    SpectralField apply_drift(const SpectralField& field) const;

    /// All three norms in one pass. theta must lie in (0,1).
    Norms norms(const SpectralField& field, double theta) const;
    double sup_norm(const SpectralField& field) const;
    double l2_norm(const SpectralField& field) const;
    double sobolev_norm(const SpectralField& field, double theta) const;

    /// Smallest c with sup_grid|u| <= c·sobolev(θ,u) on the truncated space:
    /// c = max_j sqrt(Σ_n e_n(ξ_j)²/α_n^θ)  (Cauchy-Schwarz, attained).
    double sup_embedding_constant(double theta) const;

    /// Exact projection of the constant-1 field: ⟨1, e_n⟩.
    double constant_projection(int n) const;

private:
    void require_dim(std::size_t got, std::size_t want, const char* where) const;

    double length_;
    int n_modes_;
    int n_colloc_;
    DriftPolynomial drift_;
    CovarianceSpec covariance_;

    std::vector<double> alpha_;     // α_1..α_N
    std::vector<double> lambda_;    // λ_1..λ_N
    std::vector<double> grid_;      // ξ_1..ξ_M
    std::vector<double> basis_;     // [j*N + n] = e_{n+1}(ξ_{j+1}), M×N
    std::vector<double> basis_t_;   // [n*M + j], transpose of the above
    std::vector<double> const_proj_;  // ⟨1, e_n⟩, n = 1..N
};

} // namespace ergo
