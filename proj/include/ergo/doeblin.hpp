#pragma once

#include <array>

namespace ergo {

/// A whole-space minorization certificate: inf_x P(T_steps, x, ·) >= m0·ν(·)
/// with m0 the total mass of the lower-bound measure.
struct DoeblinCertificate {
    double t_steps;  // the block length T
    double m0;       // mass in (0,1)
};

struct DoeblinConstants {
    double q;           // contraction factor per block, 1 - m0
    double beta;        // -log q
    double amplitude;   // C = e^beta = 1/q
    double gamma_rate;  // beta / T
};

/// The constants the certificate yields: q = 1-m0, β = -log q, C = e^β,
/// γ = β/T. Throws unless 0 < m0 < 1 and T > 0.
DoeblinConstants doeblin_constants(const DoeblinCertificate& cert);

/// Two-state synthetic chain used as an exact oracle for the contraction
/// arithmetic. p01/p10 are the off-diagonal transition probabilities.
class TwoStateChain {
public:
    TwoStateChain(double p01, double p10);

    /// Exact Doeblin mass of the one-step kernel: Σ_y min_x P(x,y).
    double doeblin_mass() const;

    /// TV distance (on the [0,1] scale) between the laws started from the
    /// two Dirac points after n steps; computed by exact matrix powering.
    double tv_after(int n) const;

private:
    double p01_, p10_;
};

} // namespace ergo
