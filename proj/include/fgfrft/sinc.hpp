#pragma once

#include <cmath>
#include <vector>

#include "fgfrft/errors.hpp"

namespace fgfrft {

// Normalized sinc, sin(pi x)/(pi x), and its derivative. |x| < 1e-6 switches
// to the Taylor forms 1 - (pi x)^2/6 and -pi^2 x/3 + pi^4 x^3/30 so the pair
// stays C^1 through the removable singularity. Exact integer arguments take
// the closed-form values so integer orders collapse to exact Kronecker
// coefficients.
inline double sinc(double x) {
    if (x == std::nearbyint(x)) return x == 0.0 ? 1.0 : 0.0;
    if (std::fabs(x) < 1e-6) {
        const double px = M_PI * x;
        return 1.0 - px * px / 6.0;
    }
    return std::sin(M_PI * x) / (M_PI * x);
}

inline double sinc_deriv(double x) {
    if (x == std::nearbyint(x)) {
        if (x == 0.0) return 0.0;
        const long long k = static_cast<long long>(x);
        return (k % 2 == 0 ? 1.0 : -1.0) / x; // cos(pi k)/k
    }
    if (std::fabs(x) < 1e-6) {
        const double pi2 = M_PI * M_PI;
        return -pi2 * x / 3.0 + pi2 * pi2 * x * x * x / 30.0;
    }
    const double px = M_PI * x;
    return std::cos(px) / x - std::sin(px) / (M_PI * x * x);
}

// Series weights c_n(alpha) = sinc(alpha - n) for n = -L..L, plus their
// order derivatives. Index layout: entry [n + L] holds term n.
struct SincCoeffs {
    double alpha = 0.0;
    int l = 0;
    std::vector<double> c;  // c_n(alpha)
    std::vector<double> dc; // d c_n / d alpha

    double coeff(int n) const { return c[static_cast<std::size_t>(n + l)]; }
    double dcoeff(int n) const { return dc[static_cast<std::size_t>(n + l)]; }
};

inline SincCoeffs sinc_coeffs(double alpha, int l) {
    if (l < 1) throw parameter_error("sinc_coeffs: truncation order must be >= 1");
    SincCoeffs out;
    out.alpha = alpha;
    out.l = l;
    out.c.resize(2 * static_cast<std::size_t>(l) + 1);
    out.dc.resize(2 * static_cast<std::size_t>(l) + 1);
    for (int n = -l; n <= l; ++n) {
        const double x = alpha - static_cast<double>(n);
        out.c[static_cast<std::size_t>(n + l)] = sinc(x);
        out.dc[static_cast<std::size_t>(n + l)] = sinc_deriv(x);
    }
    return out;
}

} // namespace fgfrft
