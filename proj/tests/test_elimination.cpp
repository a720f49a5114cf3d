#include <set>

#include "diagpack/elimination.hpp"
#include "diagpack/emulator.hpp"
#include "diagpack/optimizer.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace diagpack;
using namespace diagpack::testing;

namespace {

/// Full rows 0..dense_rows-1 over a circulant core on the remaining rows.
PatternMatrix dense_over_circulant(int n, int dense_rows, const std::vector<int>& residues,
                                   bool with_values = false) {
    std::vector<Coord> coords;
    for (int i = 0; i < dense_rows; ++i)
        for (int j = 0; j < n; ++j) coords.push_back({i, j, 1.0});
    for (int i = dense_rows; i < n; ++i)
        for (int r : residues) coords.push_back({i, (i + r) % n, 1.0});
    return PatternMatrix::from_coords(n, coords, with_values);
}

PipelineResult cheap_pipeline(const PatternMatrix& A, double budget_s) {
    PipelineResult out;
    out.pr = Permutation::identity(A.n());
    out.pc = Permutation::identity(A.n());
    out.num_diags = count_diagonals(A, out.pr, out.pc).num_diags;
    if (A.nnz() == 0) return out;
    OptimizerConfig cfg;
    cfg.max_passes = 2;
    cfg.time_budget_s = std::max(0.1, std::min(budget_s, 1.0));
    cfg.enable_3opt = false;
    OptResult r = optimize(A, out.pr, out.pc, cfg);
    if (r.state.num_diags < out.num_diags) {
        out.num_diags = r.state.num_diags;
        out.pr = std::move(r.pr);
        out.pc = std::move(r.pc);
    }
    return out;
}

}  // namespace

TEST_CASE("dissect") {
    SUBCASE("empty selections keep the matrix") {
        PatternMatrix A = toy7x7();
        PatternMatrix B = dissect(A, {}, {});
        CHECK(A.coords() == B.coords());
    }
    SUBCASE("matches the set-difference oracle") {
        Rng rng(107);
        for (int t = 0; t < 30; ++t) {
            PatternMatrix A = random_pattern(rng, 9, 0.35);
            std::vector<int> dr{static_cast<int>(rng_below(rng, 9)), static_cast<int>(rng_below(rng, 9))};
            std::vector<int> dc{static_cast<int>(rng_below(rng, 9))};
            PatternMatrix B = dissect(A, dr, dc);
            CHECK_NOTHROW(B.check_invariants());
            std::set<std::pair<int, int>> expected;
            for (const Coord& c : A.coords()) {
                if (c.row == dr[0] || c.row == dr[1] || c.col == dc[0]) continue;
                expected.insert({c.row, c.col});
            }
            std::set<std::pair<int, int>> got;
            for (const Coord& c : B.coords()) got.insert({c.row, c.col});
            CHECK(expected == got);
            CHECK(B.max_degree() <= A.max_degree());
            if (A.row_degree(dr[0]) > 0) CHECK(B.nnz() < A.nnz());
        }
    }
    SUBCASE("dropping the four full rows leaves the circulant core") {
        PatternMatrix A = dense_over_circulant(261, 4, {0, 1, 260});
        PatternMatrix core = dissect(A, {0, 1, 2, 3}, {});
        const int diags =
            count_diagonals(core, Permutation::identity(261), Permutation::identity(261)).num_diags;
        CHECK(diags <= 5);
        for (int i : {0, 1, 2, 3}) CHECK(core.row_degree(i) == 0);
    }
}

TEST_CASE("cost model arithmetic") {
    CostModel cm;
    SUBCASE("overhead") {
        CHECK(elimination_overhead_us(0, 0, 10, cm) == 0.0);
        CHECK(elimination_overhead_us(4, 0, 261, cm) ==
              doctest::Approx(4 * (3814.3 + 9 * 11073.3)).epsilon(1e-12));
        CHECK(elimination_overhead_us(0, 7, 1000, cm) == doctest::Approx(7 * 3814.3));
    }
    SUBCASE("gain") {
        CHECK(elimination_gain_us(0, cm, 50) == 0.0);
        CHECK(elimination_gain_us(256, cm, 4096) == doctest::Approx(3811225.6).epsilon(1e-12));
        CHECK(elimination_gain_us(1, cm, 8192) == doctest::Approx(2 * (3814.3 + 11073.3)));
    }
    SUBCASE("validation") {
        CostModel bad;
        bad.slots = 1000;  // not a power of two
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }
}

TEST_CASE("select_and_plan") {
    CostModel cm;
    PlanSearchConfig scfg;
    scfg.per_candidate_budget_s = 0.2;
    scfg.final_budget_s = 0.5;
    SUBCASE("a matrix at its degree bound stays untouched") {
        PatternMatrix C = circulant(12, {0, 4});
        EliminationPlan p = select_and_plan(C, cm, cheap_pipeline, scfg);
        CHECK(p.dense_rows.empty());
        CHECK(p.dense_cols.empty());
        CHECK_FALSE(p.profitable);
        CHECK(p.diags_before == p.diags_after);
    }
    SUBCASE("four full rows over a circulant core are eliminated") {
        PatternMatrix A = dense_over_circulant(261, 4, {0, 1, 260});
        EliminationPlan p = select_and_plan(A, cm, cheap_pipeline, scfg);
        CHECK(p.dense_rows == std::vector<int>{0, 1, 2, 3});
        CHECK(p.dense_cols.empty());
        CHECK(p.diags_before == 261);
        CHECK(p.diags_after <= 5);
        CHECK(p.diags_before - p.diags_after >= 256);
        CHECK(p.profitable);
        CHECK(p.overhead_us <= p.gain_us);
    }
    SUBCASE("hand-checked profit on a 10x10 instance") {
        PatternMatrix A = dense_over_circulant(10, 1, {0, 5});
        EliminationPlan p = select_and_plan(A, cm, cheap_pipeline, scfg);
        CHECK(p.dense_rows == std::vector<int>{0});
        CHECK(p.diags_before == 10);
        CHECK(p.diags_after == 2);
        CHECK(p.overhead_us == doctest::Approx(3814.3 + 4 * 11073.3));
        CHECK(p.gain_us == doctest::Approx(8 * (3814.3 + 11073.3)));
        CHECK(p.gain_us_no_split == p.gain_us);  // single-ciphertext regime
        CHECK(p.profitable);
        // the post-plan estimate covers the core product plus the row handling
        CHECK(estimate_time_us(p.diags_after, 10, cm, p) ==
              doctest::Approx(2 * (3814.3 + 11073.3) + p.overhead_us));
    }
}

TEST_CASE("assemble_result") {
    Rng rng(109);
    SUBCASE("empty selections return the core product") {
        PatternMatrix A = random_pattern(rng, 6, 0.4, true);
        std::vector<double> x = random_vector(rng, 6);
        std::vector<double> core_y = dense_matvec(A, x);
        CHECK(assemble_result(core_y, A, x, {}, {}) == core_y);
    }
    SUBCASE("identity matrix with its first row eliminated") {
        std::vector<Coord> eye;
        for (int i = 0; i < 5; ++i) eye.push_back({i, i, 1.0});
        PatternMatrix I = PatternMatrix::from_coords(5, eye, true);
        std::vector<double> x{5, 4, 3, 2, 1};
        PatternMatrix core = dissect(I, {0}, {});
        std::vector<double> y = assemble_result(dense_matvec(core, x), I, x, {0}, {});
        CHECK(y == x);
    }
    SUBCASE("random instances reproduce the dense product exactly") {
        for (int t = 0; t < 40; ++t) {
            PatternMatrix A = random_pattern(rng, 9, 0.45, true);
            std::vector<int> dr, dc;
            for (int i = 0; i < 9; ++i) {
                if (rng_below(rng, 4) == 0) dr.push_back(i);
                if (rng_below(rng, 4) == 0) dc.push_back(i);
            }
            std::vector<double> x = random_vector(rng, 9);
            PatternMatrix core = dissect(A, dr, dc);
            std::vector<double> y = assemble_result(dense_matvec(core, x), A, x, dr, dc);
            std::vector<double> want = dense_matvec(A, x);
            for (int i = 0; i < 9; ++i)
                CHECK(std::fabs(y[i] - want[i]) <= 1e-10 * std::max(1.0, std::fabs(want[i])));
        }
    }
}
