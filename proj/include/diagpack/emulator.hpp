#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "diagpack/cost_model.hpp"
#include "diagpack/pattern.hpp"

namespace diagpack {

/// Operation counts of one diagonal-sum product. `rots` excludes the main
/// diagonal (k = 0 needs no rotation); `rots_incl_zero` counts it too so
/// either accounting can be reported.
struct OpCount {
    int mults = 0;
    int rots = 0;
    int rots_incl_zero = 0;
    int adds = 0;
};

/// Cyclic-diagonal decomposition of a valued matrix: entries[k][i] holds
/// a_{i,(k+i) mod n}, stored only for non-empty diagonals.
struct DiagonalDecomposition {
    int n = 0;
    std::map<int, std::vector<double>> entries;
    std::vector<int> support() const {
        std::vector<int> s;
        s.reserve(entries.size());
        for (const auto& [k, v] : entries) s.push_back(k);
        return s;
    }
};

inline DiagonalDecomposition decompose(const PatternMatrix& A) {
    if (!A.has_values()) throw std::invalid_argument("decompose requires a valued matrix");
    DiagonalDecomposition d;
    d.n = A.n();
    for (int i = 0; i < A.n(); ++i) {
        const auto& cols = A.row(i);
        const auto& vals = A.row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) {
            const int k = diag_index(i, cols[t], A.n());
            auto& vec = d.entries[k];
            if (vec.empty()) vec.assign(A.n(), 0.0);
            vec[i] = vals[t];
        }
    }
    return d;
}

inline std::vector<double> rotate_left(const std::vector<double>& x, int k) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = x[(i + k) % n];
    return out;
}

/// Plaintext emulation of the diagonal-sum product: y = sum over non-empty
/// diagonals of d_k (elementwise*) rot^k(x).
inline std::vector<double> hs_spmv(const DiagonalDecomposition& d, const std::vector<double>& x,
                                   OpCount* ops = nullptr) {
    if (static_cast<int>(x.size()) != d.n) throw std::invalid_argument("vector length mismatch");
    std::vector<double> y(d.n, 0.0);
    int used = 0;
    for (const auto& [k, diag] : d.entries) {
        const std::vector<double> xr = rotate_left(x, k);
        for (int i = 0; i < d.n; ++i) y[i] += diag[i] * xr[i];
        ++used;
    }
    if (ops) {
        ops->mults = used;
        ops->rots_incl_zero = used;
        ops->rots = used - (d.entries.count(0) ? 1 : 0);
        ops->adds = used > 0 ? used - 1 : 0;
    }
    return y;
}

/// The permuted three-step pipeline: permute the input entries, multiply with
/// the permuted matrix, and put the output entries back into place. The result
/// is independent of the permutations; only the operation counts change.
inline std::vector<double> permuted_pipeline(const PatternMatrix& A, const Permutation& pr,
                                             const Permutation& pc, const std::vector<double>& x,
                                             OpCount* ops = nullptr) {
    if (static_cast<int>(x.size()) != A.n()) throw std::invalid_argument("vector length mismatch");
    const PatternMatrix Ap = apply_permutations(A, pr, pc);
    std::vector<double> xp(x.size());
    for (int j = 0; j < A.n(); ++j) xp[pc.forward[j]] = x[j];
    const std::vector<double> yp = hs_spmv(decompose(Ap), xp, ops);
    std::vector<double> y(x.size());
    for (int i = 0; i < A.n(); ++i) y[i] = yp[pr.forward[i]];
    return y;
}

/// Dense reference product used as the emulator's oracle in tests and in the
/// verify subcommand.
inline std::vector<double> dense_matvec(const PatternMatrix& A, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != A.n()) throw std::invalid_argument("vector length mismatch");
    std::vector<double> y(A.n(), 0.0);
    for (int i = 0; i < A.n(); ++i) {
        const auto& cols = A.row(i);
        const auto& vals = A.row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) y[i] += vals[t] * x[cols[t]];
    }
    return y;
}

}  // namespace diagpack
