// Adaptive Simpson quadrature.
//
// Production code uses closed-form antiderivatives wherever they exist;
// quadrature is needed only for the approximation-error integrals (no
// antiderivative once the absolute value is taken) and for the numeric
// Bennett integral cross-check.  The same routine doubles as the test
// oracle for every closed form in the library.

#pragma once

#include <cmath>
#include <stdexcept>

namespace cquant {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double abs_tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * abs_tol)
        return left + right + err / 15.0; // Richardson extrapolation
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

// Integrate f over [a, b] to the given absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 48) {
    if (!(a <= b)) throw std::domain_error("adaptive_simpson: need a <= b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

} // namespace cquant
