#pragma once

#include <vector>

namespace ergo {

/// Parameters of the scalar majorant ODE  y' = -k1·y^(1+epsilon) + c_src.
struct ComparisonOde {
    double k1;
    double epsilon;
    double c_src;
};

/// Solve y' = -k1·y^(1+eps) + c_src, y(0) = y0, at the given times
/// (nonnegative, increasing). Uses the closed form
///   y(t) = y0·(1 + eps·k1·y0^eps·t)^(-1/eps)   when c_src = 0
/// (which reduces to y0/(1+k1·y0·t) for eps = 1) and adaptive RK4 with
/// step-doubling error control otherwise. y stays nonnegative.
std::vector<double> comparison_ode(const ComparisonOde& ode, double y0,
                                   const std::vector<double>& times,
                                   double rel_tol = 1e-10);

double comparison_ode_at(const ComparisonOde& ode, double y0, double t, double rel_tol = 1e-10);

/// Uniform-in-initial-condition bound on the drift part for t >= 1:
///   max( (2·c_src/k1)^(1+epsilon), (2/(k1·epsilon) + 2)^(1/epsilon) ).
double bound_2_26(double k1, double epsilon, double c_src);

} // namespace ergo
