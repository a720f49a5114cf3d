#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diagpack/pattern.hpp"
#include "diagpack/rng.hpp"

namespace diagpack {

struct SynthSpec {
    int n = 1000;
    int ell = 10;          // non-empty diagonals of the base circulant
    double noise_p = 0.0;  // per-entry-pair removal probability
    std::uint64_t seed = 0;
    bool symmetric = true;  // the construction is always symmetric

    void validate() const {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (ell < 1 || ell > n) throw std::invalid_argument("ell must be in [1, n]");
        if (noise_p < 0.0 || noise_p >= 1.0) throw std::invalid_argument("noise_p must be in [0, 1)");
    }
};

struct SynthResult {
    PatternMatrix scrambled;  // P * A * P^T
    Permutation hidden;       // the scrambling permutation P
    int true_diags = 0;       // non-empty diagonals of the unscrambled matrix after noise
    std::vector<int> residues;  // generator residue set, closed under negation
};

namespace detail {

// Residue set of size ell, closed under negation mod n. Mirror pairs {r, n-r}
// contribute 2; an odd target takes one self-negating residue (n/2 for even
// n, otherwise 0). Residue 0 is avoided where possible so the scrambled
// matrix keeps an empty main diagonal.
inline std::vector<int> pick_residues(int n, int ell, Rng& rng) {
    std::set<int> chosen;
    if (ell == n) {
        for (int r = 0; r < n; ++r) chosen.insert(r);
        return {chosen.begin(), chosen.end()};
    }
    if (ell % 2 == 1) chosen.insert(n % 2 == 0 ? n / 2 : 0);
    std::vector<int> pair_reps;
    for (int r = 1; 2 * r < n; ++r) pair_reps.push_back(r);
    rng_shuffle(rng, pair_reps);
    for (int r : pair_reps) {
        if (static_cast<int>(chosen.size()) + 2 > ell) break;
        chosen.insert(r);
        chosen.insert(n - r);
    }
    if (static_cast<int>(chosen.size()) != ell)
        throw std::logic_error("residue closure does not reach the requested size");
    return {chosen.begin(), chosen.end()};
}

}  // namespace detail

/// Builds a symmetric circulant pattern with `ell` full diagonals, removes
/// entries with probability p (mirrored pairs share one coin so symmetry is
/// preserved), and scrambles rows and columns with one hidden permutation.
inline SynthResult generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed ^ 0xa5a5a5a55a5a5a5aULL);
    const int n = spec.n;
    SynthResult out;
    out.residues = detail::pick_residues(n, spec.ell, rng);

    std::vector<Coord> coords;
    std::set<int> live_residues;
    for (int r : out.residues) {
        for (int i = 0; i < n; ++i) {
            const int j = (i + r) % n;
            // One coin per unordered coordinate pair: the mirror of (i,j) on
            // residue n-r is emitted together with (i,j).
            if (i > j) continue;
            if (spec.noise_p > 0.0 && rng_unit(rng) < spec.noise_p) continue;
            coords.push_back({i, j, 1.0});
            live_residues.insert(diag_index(i, j, n));
            if (i != j) {
                coords.push_back({j, i, 1.0});
                live_residues.insert(diag_index(j, i, n));
            }
        }
    }
    out.true_diags = static_cast<int>(live_residues.size());

    PatternMatrix base = PatternMatrix::from_coords(n, std::move(coords));
    out.hidden = Permutation::random(n, rng);
    out.scrambled = apply_permutations(base, out.hidden, out.hidden);
    return out;
}

}  // namespace diagpack
