#include "ergo/doeblin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergo {

DoeblinConstants doeblin_constants(const DoeblinCertificate& cert) {
    if (!(cert.m0 > 0.0 && cert.m0 < 1.0))
        throw std::invalid_argument("doeblin_constants: m0 must lie in (0,1)");
    if (!(cert.t_steps > 0.0))
        throw std::invalid_argument("doeblin_constants: T must be > 0");
    DoeblinConstants c;
    c.q = 1.0 - cert.m0;
    c.beta = -std::log(c.q);
    c.amplitude = 1.0 / c.q;
    c.gamma_rate = c.beta / cert.t_steps;
    return c;
}

TwoStateChain::TwoStateChain(double p01, double p10) : p01_(p01), p10_(p10) {
    if (!(p01 > 0.0 && p01 < 1.0 && p10 > 0.0 && p10 < 1.0))
        throw std::invalid_argument("TwoStateChain: transition probabilities must lie in (0,1)");
}

double TwoStateChain::doeblin_mass() const {
    const double p00 = 1.0 - p01_;
    const double p11 = 1.0 - p10_;
    return std::min(p00, p10_) + std::min(p01_, p11);
}

double TwoStateChain::tv_after(int n) const {
    if (n < 0) throw std::invalid_argument("TwoStateChain: n must be >= 0");
    // Laws of the chain started from state 0 and state 1.
    std::array<double, 2> a{1.0, 0.0}, b{0.0, 1.0};
    const double p00 = 1.0 - p01_, p11 = 1.0 - p10_;
    for (int i = 0; i < n; ++i) {
        a = {a[0] * p00 + a[1] * p10_, a[0] * p01_ + a[1] * p11};
        b = {b[0] * p00 + b[1] * p10_, b[0] * p01_ + b[1] * p11};
    }
    return 0.5 * (std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]));
}

} // namespace ergo
