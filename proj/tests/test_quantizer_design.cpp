#include "test_helpers.hpp"

using namespace cquant;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// independent linear-scan encoder used as an oracle for encode():
// positive-quadrant cells are right-open, a boundary sample belongs to the
// cell of larger magnitude, and |x| == x_max stays in the last granular cell
int oracle_encode(const Codebook& cb, double x) {
    const int M = cb.half();
    const double ax = std::abs(x);
    int j;
    if (ax > cb.x_max()) {
        j = M + 1;
    } else {
        j = 1;
        while (j < M && ax >= cb.thresholds[j]) ++j;
    }
    return x < 0.0 ? M + 1 - j : M + j;
}

} // namespace

TEST_CASE("support bound: pinned values, scaling, validation", "[quantizer_design]") {
    CHECK_THAT(support_bound(16), WithinRel(frozen::x_max16, 1e-14));
    CHECK_THAT(support_bound(32), WithinRel(frozen::x_max32, 1e-14));
    CHECK_THAT(support_bound(16, 2.5), WithinRel(2.5 * frozen::x_max16, 1e-14));
    CHECK(support_bound(32) > support_bound(16)); // support widens with resolution

    REQUIRE_THROWS_AS(support_bound(15), std::domain_error);
    REQUIRE_THROWS_AS(support_bound(2), std::domain_error);
    REQUIRE_THROWS_AS(support_bound(16, 0.0), std::domain_error);
}

TEST_CASE("cell allocation: pinned shares, counts, and model independence",
          "[quantizer_design]") {
    const CompressorMap u16 = build_compressor(helpers::approx16(ApproxKind::uniform));
    const CompressorMap l16 = build_compressor(helpers::approx16(ApproxKind::linear));
    const CellAllocation au = allocate_cells(u16, 16);
    const CellAllocation al = allocate_cells(l16, 16);

    CHECK_THAT(au.raw[0], WithinRel(frozen::share1_16, 1e-12));
    CHECK_THAT(au.raw[1], WithinRel(frozen::share2_16, 1e-12));
    CHECK(au.counts == std::vector<int>{5, 2});
    CHECK(al.counts == std::vector<int>{5, 2});

    // the fractional shares coincide across models: on a uniform grid each
    // segment's chord is the previous one scaled by a common cube factor,
    // so the normalized cumulative integrals agree
    for (int i = 0; i < 2; ++i) CHECK_THAT(al.raw[i], WithinRel(au.raw[i], 1e-12));

    const CompressorMap u32 = build_compressor(helpers::approx16(ApproxKind::uniform, 2, 1.0, 32));
    const CellAllocation a32 = allocate_cells(u32, 32);
    CHECK_THAT(a32.raw[0], WithinRel(frozen::share1_32, 1e-12));
    CHECK_THAT(a32.raw[1], WithinRel(frozen::share2_32, 1e-12));
    CHECK(a32.counts == std::vector<int>{12, 3});
}

TEST_CASE("cell allocation properties across the design matrix", "[quantizer_design]") {
    for (const auto& [N, L] : helpers::feasible_matrix()) {
        for (const ApproxKind kind : {ApproxKind::linear, ApproxKind::uniform}) {
            const CompressorMap map = build_compressor(helpers::approx16(kind, L, 1.0, N));
            const CellAllocation alloc = allocate_cells(map, N);
            const int M = (N - 2) / 2;

            REQUIRE(static_cast<int>(alloc.counts.size()) == L);
            int total = 0;
            double raw_total = 0.0;
            for (int i = 0; i < L; ++i) {
                CHECK(alloc.counts[i] >= 1);
                total += alloc.counts[i];
                raw_total += alloc.raw[i];
                // quotas are honored whenever no floor hit zero
                if (alloc.raw[i] >= 1.0) {
                    CHECK(alloc.counts[i] >= static_cast<int>(std::floor(alloc.raw[i])) - 1);
                    CHECK(alloc.counts[i] <= static_cast<int>(std::ceil(alloc.raw[i])) + 1);
                }
            }
            CHECK(total == M);
            CHECK_THAT(raw_total, WithinRel(static_cast<double>(M), 1e-10));
        }
    }
}

TEST_CASE("infeasible designs are rejected", "[quantizer_design]") {
    for (const auto& [N, L] : {std::pair{8, 4}, {8, 8}, {16, 8}}) {
        const CompressorMap map = build_compressor(helpers::approx16(ApproxKind::uniform, L, 1.0, N));
        REQUIRE_THROWS_AS(allocate_cells(map, N), std::invalid_argument);
        REQUIRE_THROWS_AS(design_codebook(ApproxKind::uniform, N, L, 1.0), std::invalid_argument);
    }
}

TEST_CASE("codebooks match the pinned reference designs", "[quantizer_design]") {
    const Codebook u16 = design_codebook(ApproxKind::uniform, 16, 2, 1.0);
    const Codebook l16 = design_codebook(ApproxKind::linear, 16, 2, 1.0);

    REQUIRE(u16.thresholds.size() == frozen::thr_u16.size());
    REQUIRE(u16.levels.size() == frozen::lev_u16.size() + 1); // granular levels plus y_max
    CHECK(u16.thresholds.front() == 0.0);
    CHECK(u16.thresholds.back() == u16.x_max()); // exact by construction
    for (std::size_t j = 1; j < frozen::thr_u16.size(); ++j)
        CHECK_THAT(u16.thresholds[j], WithinRel(frozen::thr_u16[j], 1e-12));
    for (std::size_t j = 0; j < frozen::lev_u16.size(); ++j)
        CHECK_THAT(u16.levels[j], WithinRel(frozen::lev_u16[j], 1e-12));
    CHECK(u16.levels.back() == u16.y_max);
    CHECK_THAT(u16.y_max, WithinRel(frozen::y_max16, 1e-13));
    CHECK_THAT(u16.k, WithinRel(2.0 * frozen::x_max16 / 14.0, 1e-14));

    for (std::size_t j = 1; j < frozen::thr_l16.size(); ++j)
        CHECK_THAT(l16.thresholds[j], WithinRel(frozen::thr_l16[j], 1e-12));
    for (std::size_t j = 0; j < frozen::lev_l16.size(); ++j)
        CHECK_THAT(l16.levels[j], WithinRel(frozen::lev_l16[j], 1e-12));

    // the uniform model's thresholds land on multiples of delta / N_i within
    // each segment: the compressor is linear there
    for (int j = 1; j <= 5; ++j)
        CHECK_THAT(u16.thresholds[j], WithinRel(j * frozen::delta16 / 5.0, 1e-12));
}

TEST_CASE("codebook partition properties across the design matrix", "[quantizer_design]") {
    for (const auto& [N, L] : helpers::feasible_matrix()) {
        for (const ApproxKind kind : {ApproxKind::linear, ApproxKind::uniform}) {
            const Codebook cb = design_codebook(kind, N, L, 1.0);
            const int M = cb.half();

            REQUIRE(static_cast<int>(cb.thresholds.size()) == M + 1);
            REQUIRE(static_cast<int>(cb.levels.size()) == M + 1);
            CHECK(cb.thresholds.front() == 0.0);
            CHECK(cb.thresholds.back() == cb.x_max());
            for (int j = 1; j <= M; ++j) {
                CHECK(cb.thresholds[j] > cb.thresholds[j - 1]);
                // every granular level sits strictly inside its cell
                CHECK(cb.levels[j - 1] > cb.thresholds[j - 1]);
                CHECK(cb.levels[j - 1] < cb.thresholds[j]);
            }
            CHECK(cb.levels.back() == cb.y_max);
            CHECK(cb.y_max > cb.x_max());

            // segment boundaries are hit exactly by the cumulative counts
            int cum = 0;
            for (int i = 1; i <= L; ++i) {
                cum += cb.allocation.counts[i - 1];
                CHECK(cb.thresholds[cum] == cb.approx.grid.boundaries[i]);
            }

            // uniform model: cell widths are constant within a segment
            if (kind == ApproxKind::uniform) {
                int lo = 0;
                for (int i = 0; i < L; ++i) {
                    const int n_i = cb.allocation.counts[i];
                    const double w0 = cb.thresholds[lo + 1] - cb.thresholds[lo];
                    for (int j = 1; j < n_i; ++j)
                        CHECK_THAT(cb.thresholds[lo + j + 1] - cb.thresholds[lo + j],
                                   WithinRel(w0, 1e-10));
                    lo += n_i;
                }
            }

            // compressed-domain steps are constant within a segment
            const CompressorMap map = build_compressor(cb.approx);
            int lo = 0;
            for (int i = 0; i < L; ++i) {
                const int n_i = cb.allocation.counts[i];
                const double c0 = evaluate(map, cb.thresholds[lo]);
                const double c1 = evaluate(map, cb.thresholds[lo + n_i]);
                const double step = (c1 - c0) / n_i;
                for (int j = 1; j < n_i; ++j)
                    CHECK_THAT(evaluate(map, cb.thresholds[lo + j]) - evaluate(map, cb.thresholds[lo + j - 1]),
                               WithinRel(step, 1e-9));
                lo += n_i;
            }
        }
    }
}

TEST_CASE("codebooks scale with sigma", "[quantizer_design]") {
    const double s = 2.5;
    for (const ApproxKind kind : {ApproxKind::linear, ApproxKind::uniform}) {
        const Codebook c1 = design_codebook(kind, 32, 4, 1.0);
        const Codebook cs = design_codebook(kind, 32, 4, s);
        REQUIRE(cs.allocation.counts == c1.allocation.counts);
        for (std::size_t j = 0; j < c1.thresholds.size(); ++j)
            CHECK_THAT(cs.thresholds[j], WithinAbs(s * c1.thresholds[j], 1e-12 * s));
        for (std::size_t j = 0; j < c1.levels.size(); ++j)
            CHECK_THAT(cs.levels[j], WithinRel(s * c1.levels[j], 1e-12));
        CHECK_THAT(cs.y_max, WithinRel(s * c1.y_max, 1e-12));
        CHECK_THAT(cs.k, WithinRel(s * c1.k, 1e-12));
    }
}

TEST_CASE("encode agrees with a linear-scan oracle and decode inverts it",
          "[quantizer_design]") {
    for (const auto& [N, L] : {std::pair{16, 2}, {32, 2}, {64, 8}}) {
        for (const ApproxKind kind : {ApproxKind::linear, ApproxKind::uniform}) {
            const Codebook cb = design_codebook(kind, N, L, 1.0);
            const double xm = cb.x_max();

            std::vector<double> probes;
            for (int j = 0; j <= 2000; ++j) probes.push_back(-1.2 * xm + 2.4 * xm * j / 2000.0);
            for (const double t : cb.thresholds) {
                probes.insert(probes.end(), {t, -t, t + 1e-12, t - 1e-12, -t - 1e-12});
            }
            probes.insert(probes.end(), {0.0, -0.0, xm, -xm, cb.y_max, -cb.y_max});
            for (const double g : cb.levels) probes.insert(probes.end(), {g, -g});

            for (const double x : probes) {
                const int idx = encode(cb, x);
                REQUIRE(idx >= 0);
                REQUIRE(idx < N);
                CHECK(idx == oracle_encode(cb, x));
            }

            // every index is reachable and reproduced by its own level
            for (int idx = 0; idx < N; ++idx) CHECK(encode(cb, decode(cb, idx)) == idx);

            REQUIRE_THROWS_AS(decode(cb, -1), std::domain_error);
            REQUIRE_THROWS_AS(decode(cb, N), std::domain_error);
        }
    }
}

TEST_CASE("encode tie handling at thresholds", "[quantizer_design]") {
    const Codebook cb = design_codebook(ApproxKind::uniform, 16, 2, 1.0);
    const int M = cb.half();
    const double t1 = cb.thresholds[1];

    // a sample exactly on a threshold joins the cell of larger magnitude
    CHECK(encode(cb, t1) == encode(cb, t1 + 1e-12));
    CHECK(encode(cb, t1) != encode(cb, t1 - 1e-12));
    CHECK(encode(cb, -t1) == encode(cb, -t1 - 1e-12));

    // ... except the support edge, which stays granular
    CHECK(encode(cb, cb.x_max()) == 2 * M);
    CHECK(encode(cb, -cb.x_max()) == 1);
    CHECK(encode(cb, cb.x_max() + 1e-9) == 2 * M + 1);
    CHECK(encode(cb, -cb.x_max() - 1e-9) == 0);

    // zero lands in the smallest positive cell
    CHECK(encode(cb, 0.0) == M + 1);
    CHECK(decode(cb, M + 1) == cb.levels[0]);
    CHECK(decode(cb, M) == -cb.levels[0]);
    CHECK(decode(cb, 0) == -cb.y_max);
    CHECK(decode(cb, 2 * M + 1) == cb.y_max);
}
