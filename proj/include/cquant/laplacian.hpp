// Closed-form machinery for the zero-mean Laplacian source: density,
// distribution function, tail mass and tail centroid, partial second
// moments, overload distortion, the optimal compressor baseline and
// inverse-CDF sampling.
//
// Every tail integral here is an exact antiderivative; quadrature never
// enters these results (it is kept as a test oracle only), so no
// tolerance stacking occurs downstream.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cquant/rng.hpp"

namespace cquant {

struct LaplacianSource {
    double sigma; // standard deviation, > 0

    explicit LaplacianSource(double sigma_) : sigma(sigma_) {
        if (!(sigma > 0.0) || !std::isfinite(sigma))
            throw std::domain_error("LaplacianSource: sigma must be positive and finite");
    }

    // decay rate of |x|: p(x) = (lambda/2) exp(-lambda |x|)
    double lambda() const { return std::numbers::sqrt2 / sigma; }
};

// p(x) = (1 / (sqrt(2) sigma)) exp(-sqrt(2) |x| / sigma)
inline double pdf(const LaplacianSource& src, double x) {
    const double l = src.lambda();
    return 0.5 * l * std::exp(-l * std::abs(x));
}

// P(X <= x)
inline double cdf(const LaplacianSource& src, double x) {
    const double half_tail = 0.5 * std::exp(-src.lambda() * std::abs(x));
    return x < 0.0 ? half_tail : 1.0 - half_tail;
}

// Mass of the upper tail [t, inf), t >= 0: (1/2) exp(-sqrt(2) t / sigma).
inline double tail_mass(const LaplacianSource& src, double t) {
    if (!(t >= 0.0)) throw std::domain_error("tail_mass: t must be >= 0");
    return 0.5 * std::exp(-src.lambda() * t);
}

// Conditional mean of the upper tail [t, inf): t + sigma / sqrt(2).
inline double tail_centroid(const LaplacianSource& src, double t) {
    if (!(t >= 0.0)) throw std::domain_error("tail_centroid: t must be >= 0");
    return t + src.sigma / std::numbers::sqrt2;
}

// Integral of (x - y)^2 p(x) over [a, b] with 0 <= a <= b (b may be
// +inf), via the exponential antiderivative.  Additive over adjacent
// intervals; no quadrature.
inline double partial_second_moment(const LaplacianSource& src, double a, double b, double y) {
    if (!(a >= 0.0) || !(a <= b))
        throw std::domain_error("partial_second_moment: need 0 <= a <= b");
    const double l = src.lambda();
    // antiderivative of (x - y)^2 (l/2) e^{-l x}:
    //   G(x) = -(e^{-l x} / 2) ((x - y)^2 + 2 (x - y) / l + 2 / l^2),  G(inf) = 0
    const auto anti = [&](double x) {
        const double d = x - y;
        return -0.5 * std::exp(-l * x) * (d * d + 2.0 * d / l + 2.0 / (l * l));
    };
    const double upper = std::isinf(b) ? 0.0 : anti(b);
    return upper - anti(a);
}

// D_o = 2 * integral of (x - y_max)^2 p over [x_max, inf).  When y_max is
// the tail centroid this collapses to (sigma^2 / 2) exp(-sqrt(2) x_max / sigma).
inline double overload_distortion(const LaplacianSource& src, double x_max, double y_max) {
    if (!(x_max >= 0.0)) throw std::domain_error("overload_distortion: x_max must be >= 0");
    return 2.0 * partial_second_moment(src, x_max, std::numeric_limits<double>::infinity(), y_max);
}

// Optimal compressor for the Laplacian in closed form,
//   c(x) = x_max (1 - e^{-sqrt(2) x / (3 sigma)}) / (1 - e^{-sqrt(2) x_max / (3 sigma)}),
// extended to negative x as an odd function.
inline double optimal_compressor(const LaplacianSource& src, double x, double x_max) {
    if (!(x_max > 0.0)) throw std::domain_error("optimal_compressor: x_max must be > 0");
    if (std::abs(x) > x_max) throw std::domain_error("optimal_compressor: |x| exceeds x_max");
    const double rate = std::numbers::sqrt2 / (3.0 * src.sigma);
    const double value = x_max * std::expm1(-rate * std::abs(x)) / std::expm1(-rate * x_max);
    return x < 0.0 ? -value : value;
}

// Inverse CDF: x = -(sigma / sqrt(2)) sgn(u - 1/2) ln(1 - 2 |u - 1/2|),
// with sgn(0) mapping u = 1/2 to exactly 0.
inline double laplace_quantile(const LaplacianSource& src, double u) {
    if (!(u > 0.0) || !(u < 1.0)) throw std::domain_error("laplace_quantile: u must be in (0, 1)");
    const double d = u - 0.5;
    if (d == 0.0) return 0.0;
    const double magnitude = -std::log1p(-2.0 * std::abs(d)) / src.lambda();
    return d < 0.0 ? -magnitude : magnitude;
}

// Element k of the deterministic sample stream for this seed.
inline double sample_at(const LaplacianSource& src, std::uint64_t seed, std::uint64_t k) {
    return laplace_quantile(src, CounterRng(seed).uniform(k));
}

// First n elements of the stream; element k equals sample_at(src, seed, k)
// regardless of n or of how the stream is chunked.
inline std::vector<double> sample(const LaplacianSource& src, std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = sample_at(src, seed, k);
    return out;
}

} // namespace cquant
