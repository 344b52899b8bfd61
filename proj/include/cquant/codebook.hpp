// Quantizer construction: support bound, per-segment cell allocation
// (largest-remainder integerization), thresholds and reproduction levels
// through the exact compressor inverse, and sample encode/decode with
// documented tie rules.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cquant/compressor.hpp"

namespace cquant {

// Optimal support bound x_max = (3 sigma / sqrt(2)) ln((N + 1) / 3).
inline double support_bound(int N, double sigma = 1.0) {
    if (N < 4 || N % 2 != 0) throw std::domain_error("support_bound: N must be even and >= 4");
    if (!(sigma > 0.0)) throw std::domain_error("support_bound: sigma must be > 0");
    return 3.0 * sigma / std::numbers::sqrt2 * std::log((N + 1) / 3.0);
}

struct CellAllocation {
    std::vector<double> raw; // fractional shares M (C_i - C_{i-1}) / I_total
    std::vector<int> counts; // integerized N_i, each >= 1, summing to M = (N - 2) / 2
};

// Split the M = (N - 2) / 2 granular cells of a quadrant across segments
// in proportion to their compressed-domain widths.  Integerization is
// largest-remainder (sum preserved); a minimum of one cell per segment is
// enforced by taking the deficit from the largest-count segment.
inline CellAllocation allocate_cells(const CompressorMap& map, int N) {
    if (N < 4 || N % 2 != 0) throw std::domain_error("allocate_cells: N must be even and >= 4");
    const int L = map.approx.grid.L;
    const int M = (N - 2) / 2;
    if (M < L)
        throw std::invalid_argument("allocate_cells: infeasible design, (N-2)/2 = " + std::to_string(M) +
                                    " granular cells cannot cover " + std::to_string(L) + " segments");
    CellAllocation alloc;
    alloc.raw.resize(L);
    alloc.counts.resize(L);
    int assigned = 0;
    std::vector<std::pair<double, int>> remainders(L);
    for (int i = 0; i < L; ++i) {
        alloc.raw[i] = M * (map.cumulative[i + 1] - map.cumulative[i]) / map.I_total();
        alloc.counts[i] = static_cast<int>(std::floor(alloc.raw[i]));
        assigned += alloc.counts[i];
        remainders[i] = {alloc.raw[i] - alloc.counts[i], i};
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& lhs, const auto& rhs) { return lhs.first > rhs.first; });
    for (int j = 0; assigned < M; ++assigned, ++j) alloc.counts[remainders[j % L].second] += 1;
    for (int i = 0; i < L; ++i) {
        while (alloc.counts[i] < 1) { // feasible since M >= L; ties go to the lowest index
            const int big =
                static_cast<int>(std::max_element(alloc.counts.begin(), alloc.counts.end()) -
                                 alloc.counts.begin());
            alloc.counts[big] -= 1;
            alloc.counts[i] += 1;
        }
    }
    return alloc;
}

struct Codebook {
    ApproxPdf approx;               // model kind + segment grid + parameters
    double sigma = 0.0;             // source sigma (copied from the approximation)
    int N = 0;                      // total level count, even: 2 M granular + 2 overload
    CellAllocation allocation;      // per-segment cell counts N_i
    std::vector<double> thresholds; // positive quadrant, t_0 = 0 < ... < t_M = x_max
    std::vector<double> levels;     // positive granular levels g_1..g_M, then y_max
    double y_max = 0.0;             // overload reproduction level, x_max + sigma / sqrt(2)
    double k = 0.0;                 // nominal compressed-domain step 2 x_max / (N - 2)

    int half() const { return (N - 2) / 2; }
    double x_max() const { return approx.grid.x_max; }
    ApproxKind kind() const { return approx.kind; }
};

// Place the allocated cells uniformly in the compressed domain within
// each segment: threshold j of segment i at invert(c_lo + j s_i), level j
// at invert(c_lo + (j - 1/2) s_i), where s_i is the segment's compressed
// width over N_i.  With integer Eq-18 shares s_i equals the nominal k.
// Segment boundaries are taken exactly from the grid so they always
// appear among the thresholds.
inline Codebook build_codebook(const CompressorMap& map, int N) {
    Codebook cb;
    cb.approx = map.approx;
    cb.sigma = map.approx.sigma;
    if (!(cb.sigma > 0.0))
        throw std::domain_error("build_codebook: approximation carries no source sigma");
    cb.N = N;
    cb.allocation = allocate_cells(map, N);
    const int L = map.approx.grid.L;
    const int M = (N - 2) / 2;
    cb.thresholds.reserve(M + 1);
    cb.levels.reserve(M + 1);
    cb.thresholds.push_back(0.0);
    for (int i = 1; i <= L; ++i) {
        const int n_i = cb.allocation.counts[i - 1];
        const double c_lo = map.x_max() * map.cumulative[i - 1] / map.I_total();
        const double c_hi = map.x_max() * map.cumulative[i] / map.I_total();
        const double step = (c_hi - c_lo) / n_i;
        for (int j = 1; j <= n_i; ++j) {
            cb.levels.push_back(invert(map, c_lo + (j - 0.5) * step));
            cb.thresholds.push_back(j == n_i ? map.approx.grid.boundaries[i]
                                             : invert(map, c_lo + j * step));
        }
    }
    cb.y_max = tail_centroid(LaplacianSource(cb.sigma), map.x_max());
    cb.levels.push_back(cb.y_max);
    cb.k = 2.0 * map.x_max() / (N - 2);
    for (int j = 0; j < M; ++j) // defensive: the construction must be consistent
        if (!(cb.thresholds[j] < cb.levels[j] && cb.levels[j] < cb.thresholds[j + 1]))
            throw std::runtime_error("build_codebook: level escaped its cell");
    return cb;
}

// End-to-end design: grid from the support bound, approximation,
// compressor, codebook.
inline Codebook design_codebook(ApproxKind kind, int N, int L, double sigma) {
    const LaplacianSource src(sigma);
    const SegmentGrid grid = make_grid(support_bound(N, sigma), L);
    return build_codebook(build_compressor(make_approx(src, grid, kind)), N);
}

// Index layout (ascending by reproduction value):
//   0 = -y_max, 1..M = negative granular, M+1..2M = positive granular,
//   2M+1 = +y_max.
// Cells are half-open [t_{j-1}, t_j): a sample exactly on a threshold
// lands in the higher-magnitude cell, except that |x| = x_max is closed
// into the outermost granular cell; |x| > x_max is overload.
inline int encode(const Codebook& cb, double x) {
    const int M = cb.half();
    const double ax = std::abs(x);
    int j; // positive-side cell: 1..M granular, M + 1 overload
    if (ax > cb.x_max()) {
        j = M + 1;
    } else if (ax == cb.x_max()) {
        j = M;
    } else {
        j = static_cast<int>(
            std::upper_bound(cb.thresholds.begin() + 1, cb.thresholds.end(), ax) -
            cb.thresholds.begin());
    }
    return x < 0.0 ? M + 1 - j : M + j;
}

inline double decode(const Codebook& cb, int index) {
    const int M = cb.half();
    if (index < 0 || index >= cb.N) throw std::domain_error("decode: index out of range");
    return index <= M ? -cb.levels[M - index] : cb.levels[index - M - 1];
}

} // namespace cquant
