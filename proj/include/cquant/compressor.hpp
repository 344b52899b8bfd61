// The piecewise compressor c(x) assembled from an approximated density:
// cumulative cube-root integrals per segment, with exact forward
// evaluation, exact closed-form inverse, and the derivative needed by
// Bennett's integral.  All maps are odd in x and defined on [-x_max, x_max].

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cquant/approx_pdf.hpp"

namespace cquant {

struct CompressorMap {
    ApproxPdf approx;
    std::vector<double> cumulative; // C_0 = 0 ... C_L, strictly increasing

    double x_max() const { return approx.grid.x_max; }
    double I_total() const { return cumulative.back(); }
};

inline CompressorMap build_compressor(const ApproxPdf& ap) {
    const int L = ap.grid.L;
    // The approximant must stay positive; a chord of a heavy-tailed density
    // with too-coarse segments could dip below zero.  Affine/constant pieces
    // take their extrema at segment endpoints, so checking those suffices.
    for (int i = 1; i <= L; ++i) {
        if (!(ap.density(i, ap.grid.boundaries[i - 1]) > 0.0) ||
            !(ap.density(i, ap.grid.boundaries[i]) > 0.0))
            throw std::domain_error("build_compressor: approximant not positive on segment " +
                                    std::to_string(i));
    }
    CompressorMap map;
    map.approx = ap;
    map.cumulative.resize(L + 1);
    map.cumulative[0] = 0.0;
    for (int i = 1; i <= L; ++i)
        map.cumulative[i] =
            map.cumulative[i - 1] + cbrt_integral(ap, i, ap.grid.boundaries[i - 1], ap.grid.boundaries[i]);
    for (int i = 1; i <= L; ++i)
        if (!(map.cumulative[i] > map.cumulative[i - 1]))
            throw std::domain_error("build_compressor: cumulative integral not strictly increasing");
    return map;
}

inline CompressorMap build(const ApproxPdf& ap) { return build_compressor(ap); }

// c(x) = x_max (C_{i-1} + integral of the cube root from the segment
// start to x) / I_total, extended to negative x as an odd function.
inline double evaluate(const CompressorMap& map, double x) {
    const double ax = std::abs(x);
    if (ax > map.x_max()) throw std::domain_error("compressor evaluate: |x| exceeds x_max");
    const int i = map.approx.grid.segment_of(ax);
    const double start = map.approx.grid.boundaries[i - 1];
    const double y =
        map.x_max() * (map.cumulative[i - 1] + cbrt_integral(map.approx, i, start, ax)) / map.I_total();
    return x < 0.0 ? -y : y;
}

// Exact closed-form inverse of evaluate (no iteration): locate the
// segment through the cumulative sums, then invert the per-segment
// primitive directly.
inline double invert(const CompressorMap& map, double y) {
    const double ay = std::abs(y);
    if (ay > map.x_max()) throw std::domain_error("compressor invert: |y| exceeds x_max");
    const double target = ay * map.I_total() / map.x_max(); // cumulative-integral coordinate
    const auto& C = map.cumulative;
    int i = static_cast<int>(std::upper_bound(C.begin(), C.end(), target) - C.begin());
    i = std::clamp(i, 1, map.approx.grid.L);
    const double lo = map.approx.grid.boundaries[i - 1];
    const double hi = map.approx.grid.boundaries[i];
    const double rem = target - C[i - 1];

    double x;
    if (map.approx.kind == ApproxKind::uniform) {
        x = lo + rem / std::cbrt(map.approx.uniform_level[i - 1]);
    } else {
        const double slope = map.approx.linear[i - 1].a;
        const double icept = map.approx.linear[i - 1].b;
        if (std::abs(slope) * map.x_max() < 1e-12 * std::abs(icept)) {
            x = lo + rem / std::cbrt(icept); // near-constant approximant
        } else {
            // (a x + b)^{4/3} grows by (4 a / 3) per unit of the primitive
            const double t0 = slope * lo + icept;
            const double t43 = t0 * std::cbrt(t0) + (4.0 / 3.0) * slope * rem;
            x = (std::pow(t43, 0.75) - icept) / slope;
        }
    }
    x = std::clamp(x, lo, hi);
    return y < 0.0 ? -x : x;
}

// c'(x) = x_max approximant(|x|)^{1/3} / I_total.  At a segment boundary
// the right-hand limit is returned (deterministic choice for quadrature
// nodes); the slope is an even function of x.
inline double derivative(const CompressorMap& map, double x) {
    const double ax = std::abs(x);
    if (ax >= map.x_max()) throw std::domain_error("compressor derivative: need |x| < x_max");
    const int i = map.approx.grid.segment_of(ax);
    return map.x_max() * std::cbrt(map.approx.density(i, ax)) / map.I_total();
}

} // namespace cquant
