// Equidistant segment grid on [0, x_max]: L segments per quadrant with
// boundaries x_i = i * x_max / L.

#pragma once

#include <stdexcept>
#include <vector>

namespace cquant {

struct SegmentGrid {
    double x_max = 0.0;             // support bound, > 0
    int L = 0;                      // segments per quadrant, >= 1
    std::vector<double> boundaries; // boundaries[i] = i * x_max / L, i = 0..L

    double delta() const { return x_max / L; }

    // 1-based index of the segment containing x in [0, x_max].  Interior
    // boundaries belong to the right-hand segment (right-limit convention).
    int segment_of(double x) const {
        if (!(x >= 0.0) || x > x_max)
            throw std::domain_error("SegmentGrid::segment_of: x outside [0, x_max]");
        const int i = static_cast<int>(x / delta()) + 1;
        return i > L ? L : i;
    }
};

inline SegmentGrid make_grid(double x_max, int L) {
    if (!(x_max > 0.0)) throw std::domain_error("make_grid: x_max must be > 0");
    if (L < 1) throw std::domain_error("make_grid: L must be >= 1");
    SegmentGrid grid;
    grid.x_max = x_max;
    grid.L = L;
    grid.boundaries.resize(L + 1);
    for (int i = 0; i <= L; ++i) grid.boundaries[i] = x_max * i / static_cast<double>(L);
    grid.boundaries[L] = x_max; // exact outer boundary
    return grid;
}

} // namespace cquant
