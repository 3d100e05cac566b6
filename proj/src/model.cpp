#include "ergo/model.hpp"

#include <algorithm>
#include <cmath>

namespace ergo {

double dirichlet_eigenvalue(int n, double length) {
    if (n < 1) throw std::invalid_argument("dirichlet_eigenvalue: mode index must be >= 1");
    if (!(length > 0.0)) throw std::invalid_argument("dirichlet_eigenvalue: length must be > 0");
    const double k = static_cast<double>(n) * M_PI / length;
    return k * k;
}

DriftPolynomial::DriftPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("DriftPolynomial: non-finite coefficient");
    }
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

int DriftPolynomial::degree() const {
    return static_cast<int>(coeffs_.size()) - 1;
}

double DriftPolynomial::leading_coefficient() const {
    return coeffs_.empty() ? 0.0 : coeffs_.back();
}

bool DriftPolynomial::dissipative_shape() const {
    const int p = degree();
    return p > 1 && (p % 2 == 1) && leading_coefficient() < 0.0;
}

double DriftPolynomial::eval(double u) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * u + coeffs_[i];
    return acc;
}

double DriftPolynomial::eval_derivative(double u) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * u + coeffs_[i] * static_cast<double>(i);
    return acc;
}

CovarianceSpec CovarianceSpec::identity() {
    return CovarianceSpec{};
}

CovarianceSpec CovarianceSpec::power_law(double scale, double exponent) {
    if (!(scale > 0.0)) throw std::invalid_argument("CovarianceSpec: power-law scale must be > 0");
    if (exponent < 0.0) throw std::invalid_argument("CovarianceSpec: power-law exponent must be >= 0");
    CovarianceSpec c;
    c.kind_ = CovarianceKind::PowerLaw;
    c.scale_ = scale;
    c.exponent_ = exponent;
    return c;
}

CovarianceSpec CovarianceSpec::explicit_values(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("CovarianceSpec: explicit spectrum is empty");
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("CovarianceSpec: eigenvalues must be > 0");
    }
    CovarianceSpec c;
    c.kind_ = CovarianceKind::Explicit;
    c.values_ = std::move(values);
    return c;
}

double CovarianceSpec::eigenvalue(int n, double alpha_n) const {
    switch (kind_) {
    case CovarianceKind::Identity:
        return 1.0;
    case CovarianceKind::PowerLaw:
        return scale_ * std::pow(alpha_n, -exponent_);
    case CovarianceKind::Explicit: {
        const auto idx = static_cast<std::size_t>(n - 1);
        if (idx >= values_.size())
            throw std::out_of_range("CovarianceSpec: explicit spectrum shorter than requested mode");
        return values_[idx];
    }
    }
    return 1.0;
}

SpectralField SpectralField::single_mode(std::size_t n_modes, std::size_t mode, double value) {
    if (mode < 1 || mode > n_modes) throw std::invalid_argument("SpectralField: mode out of range");
    SpectralField f(n_modes);
    f.coeffs[mode - 1] = value;
    return f;
}

ModelSpec::ModelSpec(double length, int n_modes, int n_colloc,
                     DriftPolynomial drift, CovarianceSpec covariance)
    : length_(length),
      n_modes_(n_modes),
      n_colloc_(n_colloc),
      drift_(std::move(drift)),
      covariance_(std::move(covariance)) {
    if (!(length_ > 0.0)) throw std::invalid_argument("ModelSpec: length must be > 0");
    if (n_modes_ < 1) throw std::invalid_argument("ModelSpec: n_modes must be >= 1");
    if (n_colloc_ < 2 * n_modes_)
        throw std::invalid_argument("ModelSpec: n_colloc must be >= 2*n_modes (anti-aliasing)");

    const auto n = static_cast<std::size_t>(n_modes_);
    const auto m = static_cast<std::size_t>(n_colloc_);

    alpha_.resize(n);
    lambda_.resize(n);
    const_proj_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int mode = static_cast<int>(k) + 1;
        alpha_[k] = dirichlet_eigenvalue(mode, length_);
        lambda_[k] = covariance_.eigenvalue(mode, alpha_[k]);
        if (!(lambda_[k] > 0.0))
            throw std::invalid_argument("ModelSpec: covariance eigenvalue must be > 0");
        // ⟨1, e_n⟩ = sqrt(2/L)·L/(nπ)·(1 - cos nπ)
        const double npi = static_cast<double>(mode) * M_PI;
        const_proj_[k] = std::sqrt(2.0 / length_) * length_ / npi * (1.0 - ((mode % 2 == 0) ? 1.0 : -1.0));
    }

    grid_.resize(m);
    basis_.resize(m * n);
    basis_t_.resize(n * m);
    const double norm = std::sqrt(2.0 / length_);
    for (std::size_t j = 0; j < m; ++j) {
        grid_[j] = static_cast<double>(j + 1) * length_ / static_cast<double>(n_colloc_ + 1);
        const double theta = static_cast<double>(j + 1) * M_PI / static_cast<double>(n_colloc_ + 1);
        for (std::size_t k = 0; k < n; ++k) {
            const double v = norm * std::sin(static_cast<double>(k + 1) * theta);
            basis_[j * n + k] = v;
            basis_t_[k * m + j] = v;
        }
    }
}

void ModelSpec::require_dim(std::size_t got, std::size_t want, const char* where) const {
    if (got != want) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (got " +
                                    std::to_string(got) + ", want " + std::to_string(want) + ")");
    }
}

namespace {

// Dot product with four accumulators so the reduction vectorizes without
// -ffast-math. This is the simulator's hot loop.
inline double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

} // namespace

void ModelSpec::to_physical(const SpectralField& field, std::vector<double>& grid_values) const {
    const auto n = static_cast<std::size_t>(n_modes_);
    const auto m = static_cast<std::size_t>(n_colloc_);
    require_dim(field.size(), n, "to_physical");
    grid_values.resize(m);
    const double* u = field.coeffs.data();
    for (std::size_t j = 0; j < m; ++j) {
        grid_values[j] = dot(&basis_[j * n], u, n);
    }
}

std::vector<double> ModelSpec::to_physical(const SpectralField& field) const {
    std::vector<double> g;
    to_physical(field, g);
    return g;
}

void ModelSpec::to_spectral(const std::vector<double>& grid_values, SpectralField& field) const {
    const auto n = static_cast<std::size_t>(n_modes_);
    const auto m = static_cast<std::size_t>(n_colloc_);
    require_dim(grid_values.size(), m, "to_spectral");
    field.coeffs.resize(n);
    const double w = length_ / static_cast<double>(n_colloc_ + 1);
    const double* g = grid_values.data();
    for (std::size_t k = 0; k < n; ++k) {
        field.coeffs[k] = w * dot(&basis_t_[k * m], g, m);
    }
}

SpectralField ModelSpec::to_spectral(const std::vector<double>& grid_values) const {
    SpectralField f;
    to_spectral(grid_values, f);
    return f;
}

SpectralField ModelSpec::apply_drift(const SpectralField& field) const {
    const auto n = static_cast<std::size_t>(n_modes_);
    require_dim(field.size(), n, "apply_drift");
    if (drift_.is_zero()) return SpectralField(n);

    std::vector<double> g = to_physical(field);
    const double c0 = drift_.constant_term();
    for (double& v : g) v = drift_.eval(v) - c0;
    SpectralField out = to_spectral(g);
    if (c0 != 0.0) {
        for (std::size_t k = 0; k < n; ++k) out.coeffs[k] += c0 * const_proj_[k];
    }
    return out;
}

double ModelSpec::sup_norm(const SpectralField& field) const {
    const auto n = static_cast<std::size_t>(n_modes_);
    const auto m = static_cast<std::size_t>(n_colloc_);
    require_dim(field.size(), n, "sup_norm");
    const double* u = field.coeffs.data();
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        best = std::max(best, std::abs(dot(&basis_[j * n], u, n)));
    }
    return best;
}

double ModelSpec::l2_norm(const SpectralField& field) const {
    require_dim(field.size(), static_cast<std::size_t>(n_modes_), "l2_norm");
    double s = 0.0;
    for (double v : field.coeffs) s += v * v;
    return std::sqrt(s);
}

double ModelSpec::sobolev_norm(const SpectralField& field, double theta) const {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("sobolev_norm: theta must lie in (0,1)");
    require_dim(field.size(), static_cast<std::size_t>(n_modes_), "sobolev_norm");
    double s = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) {
        s += std::pow(alpha_[k], theta) * field.coeffs[k] * field.coeffs[k];
    }
    return std::sqrt(s);
}

Norms ModelSpec::norms(const SpectralField& field, double theta) const {
    return Norms{l2_norm(field), sup_norm(field), sobolev_norm(field, theta)};
}

double ModelSpec::sup_embedding_constant(double theta) const {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("sup_embedding_constant: theta must lie in (0,1)");
    const auto n = static_cast<std::size_t>(n_modes_);
    const auto m = static_cast<std::size_t>(n_colloc_);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = std::pow(alpha_[k], -theta);
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double b = basis_[j * n + k];
            s += b * b * w[k];
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double ModelSpec::constant_projection(int n) const {
    if (n < 1 || n > n_modes_) throw std::invalid_argument("constant_projection: mode out of range");
    return const_proj_[static_cast<std::size_t>(n - 1)];
}

} // namespace ergo
