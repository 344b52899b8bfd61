// Piecewise approximations of the source density on a segment grid: the
// chord (linear) model and the per-segment-average (uniform) model, the
// closed-form cube-root integrals they admit, and the cube-root
// approximation-error metrics (per-segment e_i and total delta).

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cquant/laplacian.hpp"
#include "cquant/quadrature.hpp"
#include "cquant/segment_grid.hpp"

namespace cquant {

enum class ApproxKind { linear, uniform };

// model names used by the CLI and the serialization schema
inline const char* model_name(ApproxKind kind) {
    return kind == ApproxKind::linear ? "plsq" : "pusq";
}

inline ApproxKind model_kind(const std::string& name) {
    if (name == "plsq") return ApproxKind::linear;
    if (name == "pusq") return ApproxKind::uniform;
    throw std::domain_error("model_kind: unknown model '" + name + "' (expected plsq or pusq)");
}

struct LinearCoeff {
    double a = 0.0; // chord slope
    double b = 0.0; // chord intercept: approximant is a * x + b on its segment
};

struct ApproxPdf {
    SegmentGrid grid;
    ApproxKind kind = ApproxKind::uniform;
    double sigma = 0.0;                // sigma of the source this was built from
    std::vector<LinearCoeff> linear;   // per segment, kind == linear
    std::vector<double> uniform_level; // p_i^u per segment, kind == uniform

    void check_segment(int i) const {
        if (i < 1 || i > grid.L)
            throw std::domain_error("ApproxPdf: segment index out of range");
    }

    // approximant value on (1-based) segment i
    double density(int i, double x) const {
        check_segment(i);
        return kind == ApproxKind::linear ? linear[i - 1].a * x + linear[i - 1].b
                                          : uniform_level[i - 1];
    }

    // approximant value at x in [0, x_max], segment located by the grid
    double density(double x) const { return density(grid.segment_of(x), x); }
};

// Chord interpolation of the density across every segment: a_i is the
// slope of p between consecutive boundaries, b_i the intercept, so the
// approximant matches p at all grid boundaries.
inline ApproxPdf linear_approx(const LaplacianSource& src, const SegmentGrid& grid) {
    ApproxPdf ap;
    ap.grid = grid;
    ap.kind = ApproxKind::linear;
    ap.sigma = src.sigma;
    ap.linear.resize(grid.L);
    for (int i = 1; i <= grid.L; ++i) {
        const double x0 = grid.boundaries[i - 1];
        const double x1 = grid.boundaries[i];
        const double p0 = pdf(src, x0);
        const double p1 = pdf(src, x1);
        const double a = (p1 - p0) / (x1 - x0);
        ap.linear[i - 1] = {a, p0 - a * x0};
    }
    return ap;
}

// Mass-preserving per-segment average of the density:
//   p_i^u = (1 / (2 Delta)) (e^{-sqrt(2) Delta (i-1) / sigma} - e^{-sqrt(2) Delta i / sigma}),
// i.e. the segment's probability mass divided by the segment width.
inline ApproxPdf uniform_approx(const LaplacianSource& src, const SegmentGrid& grid) {
    ApproxPdf ap;
    ap.grid = grid;
    ap.kind = ApproxKind::uniform;
    ap.sigma = src.sigma;
    ap.uniform_level.resize(grid.L);
    for (int i = 1; i <= grid.L; ++i) {
        const double mass = tail_mass(src, grid.boundaries[i - 1]) - tail_mass(src, grid.boundaries[i]);
        ap.uniform_level[i - 1] = mass / grid.delta();
    }
    return ap;
}

inline ApproxPdf make_approx(const LaplacianSource& src, const SegmentGrid& grid, ApproxKind kind) {
    return kind == ApproxKind::linear ? linear_approx(src, grid) : uniform_approx(src, grid);
}

// Integral of the cube root of the approximant over [a, b] inside
// segment i, in closed form.  Linear kind:
//   (3 / (4 a_i)) [ (a_i b + b_i)^{4/3} - (a_i a + b_i)^{4/3} ],
// with the constant-approximant limit (b - a) b_i^{1/3} when the slope is
// negligible; uniform kind: (b - a) (p_i^u)^{1/3}.
inline double cbrt_integral(const ApproxPdf& ap, int i, double a, double b) {
    ap.check_segment(i);
    if (!(a <= b)) throw std::domain_error("cbrt_integral: need a <= b");
    const double lo = ap.grid.boundaries[i - 1];
    const double hi = ap.grid.boundaries[i];
    const double slack = 1e-12 * ap.grid.x_max; // FP slack on the containment check
    if (a < lo - slack || b > hi + slack)
        throw std::domain_error("cbrt_integral: [a, b] not inside segment " + std::to_string(i));

    if (ap.kind == ApproxKind::uniform) {
        const double level = ap.uniform_level[i - 1];
        if (!(level > 0.0)) throw std::domain_error("cbrt_integral: approximant not positive");
        return (b - a) * std::cbrt(level);
    }
    const double slope = ap.linear[i - 1].a;
    const double icept = ap.linear[i - 1].b;
    const double ta = slope * a + icept;
    const double tb = slope * b + icept;
    if (!(ta > 0.0) || !(tb > 0.0))
        throw std::domain_error("cbrt_integral: approximant not positive on [a, b]");
    if (std::abs(slope) * ap.grid.x_max < 1e-12 * std::abs(icept))
        return (b - a) * std::cbrt(icept); // near-constant approximant
    // t^{4/3} written as t * cbrt(t) for accuracy
    return 0.75 / slope * (tb * std::cbrt(tb) - ta * std::cbrt(ta));
}

struct ApproxError {
    std::vector<double> e; // per-segment integrated cube-root error
    double delta = 0.0;    // total: sum of e
};

namespace detail {

// Locate sign changes of diff on [lo, hi] by probing and bisection; the
// |.| integrand has kinks exactly there, so they become panel boundaries
// (an absolute-value integrand ruins quadrature convergence otherwise).
template <class F>
std::vector<double> kink_points(F& diff, double lo, double hi) {
    constexpr int probes = 64;
    std::vector<double> kinks;
    double prev_x = lo;
    double prev_f = diff(lo);
    for (int j = 1; j <= probes; ++j) {
        const double x = lo + (hi - lo) * j / probes;
        const double fx = diff(x);
        if (prev_f * fx < 0.0) {
            double a = prev_x;
            double b = x;
            double fa = prev_f;
            for (int it = 0; it < 80; ++it) { // bisection to full precision
                const double m = 0.5 * (a + b);
                const double fm = diff(m);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            kinks.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return kinks;
}

// e_i = integral over segment i of |density(x)^{1/3} - approximant^{1/3}|,
// for an arbitrary density; the public entry point fixes the Laplacian.
template <class Density>
ApproxError approx_error_impl(Density&& p, const ApproxPdf& ap) {
    ApproxError result;
    result.e.resize(ap.grid.L);
    for (int i = 1; i <= ap.grid.L; ++i) {
        const double lo = ap.grid.boundaries[i - 1];
        const double hi = ap.grid.boundaries[i];
        auto diff = [&](double x) { return p(x) - ap.density(i, x); };
        auto integrand = [&](double x) {
            return std::abs(std::cbrt(p(x)) - std::cbrt(ap.density(i, x)));
        };
        std::vector<double> panels = kink_points(diff, lo, hi);
        panels.insert(panels.begin(), lo);
        panels.push_back(hi);
        double e_i = 0.0;
        for (std::size_t j = 0; j + 1 < panels.size(); ++j)
            e_i += adaptive_simpson(integrand, panels[j], panels[j + 1], 1e-10);
        result.e[i - 1] = e_i;
        result.delta += e_i;
    }
    return result;
}

} // namespace detail

// Approximation error of the model against the true Laplacian density.
inline ApproxError approx_error(const LaplacianSource& src, const ApproxPdf& ap) {
    return detail::approx_error_impl([&](double x) { return pdf(src, x); }, ap);
}

} // namespace cquant
