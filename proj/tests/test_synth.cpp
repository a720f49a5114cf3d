#include <set>

#include "diagpack/synth.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace diagpack;
using namespace diagpack::testing;

namespace {

bool pattern_is_symmetric(const PatternMatrix& A) {
    for (const Coord& c : A.coords())
        if (!A.has_entry(c.col, c.row)) return false;
    return true;
}

}  // namespace

TEST_CASE("generate: noiseless construction") {
    SynthSpec spec;
    spec.n = 200;
    spec.ell = 10;
    spec.seed = 5;
    SynthResult r = generate(spec);
    CHECK(r.true_diags == 10);
    CHECK(static_cast<int>(r.residues.size()) == 10);
    CHECK(pattern_is_symmetric(r.scrambled));
    CHECK(r.scrambled.nnz() == 10 * 200);
    // undoing the hidden permutation restores exactly ell diagonals
    Permutation inv = r.hidden.inverted();
    CHECK(count_diagonals(r.scrambled, inv, inv).num_diags == 10);
    // the scramble itself spreads the nonzeros over nearly all diagonals
    DiagState natural = count_diagonals(r.scrambled, Permutation::identity(200), Permutation::identity(200));
    CHECK(natural.num_diags >= 198);
    // residues avoid the main diagonal, so the scrambled main diagonal is empty
    CHECK(natural.diag_nnz[0] == 0);
}

TEST_CASE("generate: a scrambled thousand-order circulant occupies all off-diagonals") {
    SynthSpec spec;
    spec.n = 1000;
    spec.ell = 10;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        spec.seed = seed;
        SynthResult r = generate(spec);
        DiagState natural =
            count_diagonals(r.scrambled, Permutation::identity(1000), Permutation::identity(1000));
        CHECK(natural.num_diags == 999);  // every diagonal except the untouched main one
        CHECK(r.scrambled.nnz() == 10000);
        CHECK(r.scrambled.max_degree() == 10);
    }
}

TEST_CASE("generate: residue closure under negation") {
    for (auto [n, ell] : {std::pair{100, 10}, std::pair{101, 7}, std::pair{100, 7}, std::pair{6, 6},
                          std::pair{2, 1}, std::pair{2, 2}, std::pair{1, 1}}) {
        SynthSpec spec;
        spec.n = n;
        spec.ell = ell;
        spec.seed = 17;
        SynthResult r = generate(spec);
        CHECK(static_cast<int>(r.residues.size()) == ell);
        std::set<int> set(r.residues.begin(), r.residues.end());
        for (int v : set) CHECK(set.count((n - v) % n) == 1);
        CHECK(pattern_is_symmetric(r.scrambled));
    }
}

TEST_CASE("generate: noise keeps symmetry and the hidden recovery invariant") {
    SynthSpec spec;
    spec.n = 60;
    spec.ell = 6;
    spec.noise_p = 0.3;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        spec.seed = seed;
        SynthResult r = generate(spec);
        CHECK(pattern_is_symmetric(r.scrambled));
        CHECK(r.true_diags <= 6);
        Permutation inv = r.hidden.inverted();
        CHECK(count_diagonals(r.scrambled, inv, inv).num_diags == r.true_diags);
        CHECK(r.scrambled.nnz() < 6 * 60);  // noise removed something at p = 0.3
    }
}

TEST_CASE("generate: seeded re-simulation reproduces the instance") {
    SynthSpec spec;
    spec.n = 20;
    spec.ell = 4;
    spec.noise_p = 0.5;
    spec.seed = 99;
    SynthResult a = generate(spec);
    SynthResult b = generate(spec);
    CHECK(a.scrambled.coords() == b.scrambled.coords());
    CHECK(a.hidden == b.hidden);
    CHECK(a.true_diags == b.true_diags);
    CHECK(a.scrambled.nnz() == b.scrambled.nnz());
}

TEST_CASE("generate: validation") {
    SynthSpec bad;
    bad.n = 10;
    bad.ell = 11;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
    bad.ell = 2;
    bad.noise_p = 1.0;
    CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}
