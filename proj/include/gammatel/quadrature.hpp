#pragma once

// Tanh-sinh (double-exponential) quadrature on a finite open interval.
// Node weights decay double-exponentially toward the endpoints, which makes
// integrable power singularities like x^{-1/2} converge without any manual
// subdivision. The integrand is called as f(x, dist_a, dist_b) where the
// distances to the interval endpoints are computed directly from the node
// transform, not by subtraction from x -- an integrand that is singular at
// an endpoint can rely on them down to ~1e-290 without cancellation.

#include <cmath>
#include <limits>

#include "gammatel/types.hpp"

namespace gammatel {

template <class F>
double tanh_sinh(F&& f, double a, double b, double tol,
                 double* error_estimate = nullptr) {
    if (!(b > a))
        throw std::domain_error("tanh_sinh: interval must have positive length");
    if (!(tol > 0.0))
        throw std::domain_error("tanh_sinh: tolerance must be positive");

    constexpr double kPiHalf = 1.5707963267948966;
    constexpr int kMaxLevel = 12;
    const double half = 0.5 * (b - a);
    const double length = b - a;
    const double center = a + half;

    double previous = std::numeric_limits<double>::quiet_NaN();
    double integral = 0.0;
    double err = std::numeric_limits<double>::infinity();

    for (int level = 0; level <= kMaxLevel; ++level) {
        const double h = std::ldexp(1.0, -level);
        double sum = kPiHalf * f(center, half, half);  // k = 0 node
        int tiny_run = 0;
        for (int k = 1;; ++k) {
            const double kh = k * h;
            const double y = kPiHalf * std::sinh(kh);
            // 1 - tanh(y) = 2 / (e^{2y} + 1), computed without cancellation
            if (2.0 * y > 1400.0) break;  // offsets underflow past here
            const double one_minus = 2.0 / (std::exp(2.0 * y) + 1.0);
            const double offset = half * one_minus;
            if (offset == 0.0) break;
            const double cosh_y = std::cosh(y);
            const double w = kPiHalf * std::cosh(kh) / (cosh_y * cosh_y);
            if (w == 0.0) break;
            const double left = f(a + offset, offset, length - offset);
            const double right = f(b - offset, length - offset, offset);
            const double contribution = w * (left + right);
            sum += contribution;
            if (std::fabs(contribution) <= std::fabs(sum) * 1e-17) {
                if (++tiny_run >= 3) break;
            } else {
                tiny_run = 0;
            }
        }
        integral = h * half * sum;
        if (level >= 2) {
            err = std::fabs(integral - previous);
            if (err <= tol) {
                if (error_estimate) *error_estimate = err;
                return integral;
            }
        }
        previous = integral;
    }
    throw QuadratureError("tanh_sinh: tolerance not reached at maximum refinement level",
                          integral, err);
}

}  // namespace gammatel
