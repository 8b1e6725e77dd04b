#pragma once

// Test-only oracles, deliberately independent of the library's evaluation
// paths: adaptive Simpson quadrature of the defining integrals, with the
// libm lgamma for normalization (the library uses its own Lanczos fit).

#include <cmath>
#include <functional>

namespace oracle {

namespace detail {

template <class F>
double adapt(F&& f, double a, double b, double fa, double fm, double fb, double whole,
             double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 20);
}

// P(a,u) from its defining integral, substituting t = s^2 so the integrand
// s^{2a-1} e^{-s^2} is regular at 0 for every a >= 1/2. The quadrature
// tolerance scales with Gamma(a), the magnitude of the unnormalized tail.
inline double reg_lower_gamma(double a, double u) {
    if (u <= 0.0) return 0.0;
    const double r = std::sqrt(u);
    auto f = [a](double s) { return std::pow(s, 2.0 * a - 1.0) * std::exp(-s * s); };
    const double scale = std::exp(std::lgamma(a));
    return 2.0 * integrate(f, 0.0, r, 1e-15 * scale) / scale;
}

inline double upper_gamma(double a, double u) {
    return std::exp(std::lgamma(a)) * (1.0 - reg_lower_gamma(a, u));
}

// gamma(a, u) = Gamma(a) P(a, u), unnormalized lower tail.
inline double lower_gamma_unnormalized(double a, double u) {
    return reg_lower_gamma(a, u) * std::exp(std::lgamma(a));
}

// The convolution integral int_0^w e^{-y} y^{a1-1} gamma(a2, w - y) dy,
// computed by brute-force nested quadrature (outer substitution y = s^2).
inline double gamma_convolution(double a1, double a2, double w) {
    auto f = [&](double s) {
        const double y = s * s;
        return 2.0 * std::pow(s, 2.0 * a1 - 1.0) * std::exp(-y) *
               lower_gamma_unnormalized(a2, w - y);
    };
    return integrate(f, 0.0, std::sqrt(w), 1e-12);
}

}  // namespace oracle
