#include <cmath>

#include "diagpack/emulator.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace diagpack;
using namespace diagpack::testing;

namespace {

double max_rel_err(const std::vector<double>& got, const std::vector<double>& want) {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double scale = std::max(1.0, std::fabs(want[i]));
        worst = std::max(worst, std::fabs(got[i] - want[i]) / scale);
    }
    return worst;
}

}  // namespace

TEST_CASE("decompose") {
    SUBCASE("identity matrix") {
        std::vector<Coord> eye;
        for (int i = 0; i < 5; ++i) eye.push_back({i, i, 1.0});
        DiagonalDecomposition d = decompose(PatternMatrix::from_coords(5, eye, true));
        CHECK(d.support() == std::vector<int>{0});
        CHECK(d.entries.at(0) == std::vector<double>(5, 1.0));
    }
    SUBCASE("toy pattern with unit values") {
        DiagonalDecomposition d = decompose(toy7x7(true));
        CHECK(d.support() == std::vector<int>{0, 2});
        const auto& d2 = d.entries.at(2);
        int ones = 0;
        for (int i = 0; i < 7; ++i)
            if (d2[i] == 1.0) ++ones;
        CHECK(ones == 4);
        CHECK(d2[0] == 1.0);
        CHECK(d2[1] == 0.0);  // explicit zero inside a stored diagonal
    }
    SUBCASE("reconstruction identity on random valued matrices") {
        Rng rng(89);
        for (int t = 0; t < 20; ++t) {
            PatternMatrix A = random_pattern(rng, 6, 0.4, true);
            DiagonalDecomposition d = decompose(A);
            for (const Coord& c : A.coords())
                CHECK(d.entries.at(diag_index(c.row, c.col, 6))[c.row] == c.val);
        }
    }
    SUBCASE("pattern-only input is rejected") {
        CHECK_THROWS_AS(decompose(toy7x7(false)), std::invalid_argument);
    }
}

TEST_CASE("hs_spmv") {
    SUBCASE("identity matrix passes the vector through with one mult") {
        std::vector<Coord> eye;
        for (int i = 0; i < 6; ++i) eye.push_back({i, i, 1.0});
        PatternMatrix I = PatternMatrix::from_coords(6, eye, true);
        Rng rng(97);
        std::vector<double> x = random_vector(rng, 6);
        OpCount ops;
        std::vector<double> y = hs_spmv(decompose(I), x, &ops);
        CHECK(y == x);
        CHECK(ops.mults == 1);
        CHECK(ops.rots == 0);
        CHECK(ops.rots_incl_zero == 1);
        CHECK(ops.adds == 0);
    }
    SUBCASE("toy pattern against the dense oracle") {
        PatternMatrix A = toy7x7(true);
        std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
        OpCount ops;
        std::vector<double> y = hs_spmv(decompose(A), x, &ops);
        CHECK(max_rel_err(y, dense_matvec(A, x)) == 0.0);
        CHECK(ops.mults == 2);
        CHECK(ops.rots == 1);
    }
    SUBCASE("random valued instances match the dense oracle") {
        Rng rng(101);
        for (int t = 0; t < 40; ++t) {
            const int n = 2 + static_cast<int>(rng_below(rng, 9));
            PatternMatrix A = random_pattern(rng, n, 0.4, true);
            std::vector<double> x = random_vector(rng, n);
            OpCount ops;
            std::vector<double> y = hs_spmv(decompose(A), x, &ops);
            CHECK(max_rel_err(y, dense_matvec(A, x)) <= 1e-12);
            CHECK(ops.mults == count_diagonals(A, Permutation::identity(n), Permutation::identity(n)).num_diags);
        }
    }
}

TEST_CASE("permuted_pipeline") {
    Rng rng(103);
    SUBCASE("identity permutations reduce to hs_spmv") {
        PatternMatrix A = random_pattern(rng, 8, 0.35, true);
        std::vector<double> x = random_vector(rng, 8);
        const Permutation id = Permutation::identity(8);
        CHECK(permuted_pipeline(A, id, id, x) == hs_spmv(decompose(A), x));
    }
    SUBCASE("output is permutation-transparent; only ops change") {
        for (int t = 0; t < 30; ++t) {
            const int n = 3 + static_cast<int>(rng_below(rng, 8));
            PatternMatrix A = random_pattern(rng, n, 0.35, true);
            std::vector<double> x = random_vector(rng, n);
            Permutation pr = Permutation::random(n, rng);
            Permutation pc = Permutation::random(n, rng);
            OpCount ops;
            std::vector<double> y = permuted_pipeline(A, pr, pc, x, &ops);
            CHECK(max_rel_err(y, dense_matvec(A, x)) <= 1e-12);
            CHECK(ops.mults == count_diagonals(A, pr, pc).num_diags);
        }
    }
    SUBCASE("the demo swap keeps the product and drops one mult") {
        PatternMatrix A = PatternMatrix::from_coords(
            6, {{0, 1, 1.0}, {1, 4, 1.0}, {3, 4, 1.0}, {3, 2, 1.0}, {4, 5, 1.0}}, true);
        std::vector<double> x{1, 2, 3, 4, 5, 6};
        const Permutation id = Permutation::identity(6);
        OpCount before, after;
        std::vector<double> y0 = permuted_pipeline(A, id, id, x, &before);
        std::vector<int> f{0, 3, 2, 1, 4, 5};  // exchange rows 1 and 3
        Permutation pr = Permutation::from_forward(f);
        std::vector<double> y1 = permuted_pipeline(A, pr, id, x, &after);
        CHECK(y0 == y1);
        CHECK(before.mults == 3);
        CHECK(after.mults == 2);
    }
}

TEST_CASE("estimate_time") {
    CostModel cm;
    CHECK(estimate_time_us(0, 100, cm) == 0.0);
    SUBCASE("five diagonals at n=261") {
        CHECK(estimate_time_us(5, 261, cm) == doctest::Approx(5 * 14887.6).epsilon(1e-12));
    }
    SUBCASE("linear scaling gives the documented speedup ratio") {
        const double r = estimate_time_us(483, 114599, cm) / estimate_time_us(21866, 114599, cm);
        CHECK(std::fabs(r - 483.0 / 21866.0) <= 1e-9);
    }
    SUBCASE("strictly increasing in diagonals and ciphertext splits") {
        CHECK(estimate_time_us(10, 100, cm) < estimate_time_us(11, 100, cm));
        CHECK(estimate_time_us(10, 4096, cm) < estimate_time_us(10, 4097, cm));
    }
}
