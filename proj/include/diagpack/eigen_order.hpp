#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "diagpack/lanczos.hpp"
#include "diagpack/pattern.hpp"
#include "diagpack/symmetrize.hpp"

namespace diagpack {

struct EigenOrderResult {
    Permutation pr, pc;
    int num_diags = 0;
    int pairs_evaluated = 0;
};

namespace detail {

inline int count_diags_with_scratch(const PatternMatrix& A, const Permutation& pr,
                                    const Permutation& pc, std::vector<int>& scratch) {
    const int n = A.n();
    std::fill(scratch.begin(), scratch.end(), 0);
    int used = 0;
    for (int i = 0; i < n; ++i) {
        const int rp = pr.forward[i];
        for (int j : A.row(i)) {
            int& c = scratch[diag_index(rp, pc.forward[j], n)];
            if (c++ == 0) ++used;
        }
    }
    return used;
}

}  // namespace detail

/// Spectral initializer for near-circulant patterns: takes the nev largest
/// algebraic eigenvectors of the symmetrized adjacency, sorts vertices by the
/// polar angle of every eigenvector pair, and keeps the permutation with the
/// fewest resulting diagonals. Ties in the angle sort break by vertex id.
inline EigenOrderResult eigen_order(const PatternMatrix& A, SymMode mode, int nev,
                                    const LanczosOptions& lopt = {}) {
    const SymmetrizedGraph g = symmetrize(A, mode);
    if (nev < 2 || nev > g.m) throw std::invalid_argument("nev must be in [2, vertex count]");

    const auto matvec = [&g](const double* in, double* out) {
        for (int v = 0; v < g.m; ++v) {
            double s = 0.0;
            for (int w : g.adj[v]) s += in[w];
            out[v] = s;
        }
    };
    const std::vector<EigenPair> pairs = lanczos_largest(matvec, g.m, nev, lopt);

    EigenOrderResult best;
    best.num_diags = A.n() + 1;
    std::vector<int> scratch(A.n(), 0);
    std::vector<std::pair<double, int>> keyed(g.m);
    std::vector<int> order(g.m);

    for (int a = 0; a < nev; ++a) {
        for (int b = a + 1; b < nev; ++b) {
            const std::vector<double>& ua = pairs[a].vector;
            const std::vector<double>& ub = pairs[b].vector;
            for (int v = 0; v < g.m; ++v) keyed[v] = {std::atan2(ub[v], ua[v]), v};
            std::sort(keyed.begin(), keyed.end());
            for (int t = 0; t < g.m; ++t) order[t] = keyed[t].second;

            Permutation pr, pc;
            if (mode == SymMode::PatternSum) {
                pr = Permutation::from_order(order);
                pc = pr;
            } else {
                std::tie(pr, pc) = split_bipartite_order(order, A.n());
            }
            const int diags = detail::count_diags_with_scratch(A, pr, pc, scratch);
            ++best.pairs_evaluated;
            if (diags < best.num_diags) {
                best.num_diags = diags;
                best.pr = std::move(pr);
                best.pc = std::move(pc);
            }
        }
    }
    return best;
}

}  // namespace diagpack
