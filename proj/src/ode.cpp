#include "ergo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

double rhs(const ComparisonOde& o, double y) {
    return -o.k1 * std::pow(y, 1.0 + o.epsilon) + o.c_src;
}

double rk4_step(const ComparisonOde& o, double y, double h) {
    const double k1 = rhs(o, y);
    const double k2 = rhs(o, std::max(0.0, y + 0.5 * h * k1));
    const double k3 = rhs(o, std::max(0.0, y + 0.5 * h * k2));
    const double k4 = rhs(o, std::max(0.0, y + h * k3));
    return std::max(0.0, y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// Advance from y at time t to time t+span with step-doubling control.
double advance(const ComparisonOde& o, double y, double span, double rel_tol) {
    double remaining = span;
    // Initial step guess from the local timescale 1/(k1·(1+eps)·y^eps).
    double h = remaining;
    const double stiff = o.k1 * (1.0 + o.epsilon) * std::pow(std::max(y, 1e-300), o.epsilon);
    if (stiff > 0.0) h = std::min(h, 0.5 / stiff);

    while (remaining > 0.0) {
        h = std::min(h, remaining);
        const double full = rk4_step(o, y, h);
        const double half = rk4_step(o, rk4_step(o, y, 0.5 * h), 0.5 * h);
        const double scale = std::max({std::abs(half), std::abs(y), 1e-12});
        const double err = std::abs(full - half) / scale;
        if (err > rel_tol && h > 1e-15 * span) {
            h *= 0.5;
            continue;
        }
        y = half;
        remaining -= h;
        if (err < rel_tol / 32.0) h *= 2.0;
    }
    return y;
}

} // namespace

std::vector<double> comparison_ode(const ComparisonOde& ode, double y0,
                                   const std::vector<double>& times, double rel_tol) {
    if (!(ode.k1 > 0.0)) throw std::invalid_argument("comparison_ode: k1 must be > 0");
    if (!(ode.epsilon > 0.0)) throw std::invalid_argument("comparison_ode: epsilon must be > 0");
    if (ode.c_src < 0.0) throw std::invalid_argument("comparison_ode: c_src must be >= 0");
    if (y0 < 0.0) throw std::invalid_argument("comparison_ode: y0 must be >= 0");

    std::vector<double> out;
    out.reserve(times.size());

    if (ode.c_src == 0.0) {
        // Separable closed form, exact for any epsilon.
        for (double t : times) {
            if (t < 0.0) throw std::invalid_argument("comparison_ode: negative time");
            const double denom = 1.0 + ode.epsilon * ode.k1 * std::pow(y0, ode.epsilon) * t;
            out.push_back(y0 * std::pow(denom, -1.0 / ode.epsilon));
        }
        return out;
    }

    double y = y0;
    double t = 0.0;
    for (double target : times) {
        if (target < t) throw std::invalid_argument("comparison_ode: times must be increasing");
        if (target > t) {
            y = advance(ode, y, target - t, rel_tol);
            t = target;
        }
        out.push_back(y);
    }
    return out;
}

double comparison_ode_at(const ComparisonOde& ode, double y0, double t, double rel_tol) {
    return comparison_ode(ode, y0, {t}, rel_tol)[0];
}

double bound_2_26(double k1, double epsilon, double c_src) {
    if (!(k1 > 0.0) || !(epsilon > 0.0) || c_src < 0.0)
        throw std::invalid_argument("bound_2_26: need k1 > 0, epsilon > 0, c_src >= 0");
    const double a = std::pow(2.0 * c_src / k1, 1.0 + epsilon);
    const double b = std::pow(2.0 / (k1 * epsilon) + 2.0, 1.0 / epsilon);
    return std::max(a, b);
}

} // namespace ergo
