#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagpack/io.hpp"
#include "diagpack/pattern.hpp"

namespace diagpack {

struct ExactResult {
    int optimum = 0;
    Permutation pr, pc;
    std::uint64_t nodes_explored = 0;
    std::string method;
};

namespace detail {

class ExactSearch {
public:
    explicit ExactSearch(const PatternMatrix& A)
        : A_(&A), n_(A.n()), col_pos_(A.n(), -1), row_pos_(A.n(), -1), residue_use_(A.n(), 0) {
        pos_free_.assign(n_, true);
        row_pos_free_.assign(n_, true);
    }

    ExactResult run(bool prune) {
        best_ = n_ + 1;
        lower_bound_ = A_->max_degree();
        prune_ = prune;
        nodes_ = 0;
        if (A_->nnz() == 0) {
            ExactResult r;
            r.optimum = 0;
            r.pr = Permutation::identity(n_);
            r.pc = Permutation::identity(n_);
            r.nodes_explored = 0;
            return r;
        }
        assign_col(0);
        ExactResult r;
        r.optimum = best_;
        r.pr = Permutation::from_forward(best_row_pos_);
        r.pc = Permutation::from_forward(best_col_pos_);
        r.nodes_explored = nodes_;
        return r;
    }

private:
    // Columns take positions first; row 0 is pinned to position 0, so the
    // residues of row 0's nonzeros commit already during the column phase.
    void assign_col(int j) {
        if (done()) return;
        if (j == n_) {
            row_pos_[0] = 0;
            row_pos_free_[0] = false;
            assign_row(1);
            row_pos_free_[0] = true;
            row_pos_[0] = -1;
            return;
        }
        const bool row0_has = A_->has_entry(0, j);
        for (int pos = 0; pos < n_; ++pos) {
            if (!pos_free_[pos]) continue;
            ++nodes_;
            col_pos_[j] = pos;
            pos_free_[pos] = false;
            if (row0_has) use_residue(pos);
            if (!prune_ || distinct_ < best_) assign_col(j + 1);
            if (row0_has) release_residue(pos);
            pos_free_[pos] = true;
            col_pos_[j] = -1;
            if (done()) return;
        }
    }

    void assign_row(int i) {
        if (done()) return;
        if (i == n_) {
            if (distinct_ < best_) {
                best_ = distinct_;
                best_col_pos_ = col_pos_;
                best_row_pos_ = row_pos_;
            }
            return;
        }
        for (int pos = 1; pos < n_; ++pos) {
            if (!row_pos_free_[pos]) continue;
            ++nodes_;
            row_pos_[i] = pos;
            row_pos_free_[pos] = false;
            for (int j : A_->row(i)) use_residue((col_pos_[j] + n_ - pos) % n_);
            if (!prune_ || distinct_ < best_) assign_row(i + 1);
            for (int j : A_->row(i)) release_residue((col_pos_[j] + n_ - pos) % n_);
            row_pos_free_[pos] = true;
            row_pos_[i] = -1;
            if (done()) return;
        }
    }

    bool done() const { return best_ == lower_bound_; }

    void use_residue(int k) {
        if (residue_use_[k]++ == 0) ++distinct_;
    }

    void release_residue(int k) {
        if (--residue_use_[k] == 0) --distinct_;
    }

    const PatternMatrix* A_;
    int n_;
    bool prune_ = true;
    std::vector<int> col_pos_, row_pos_;
    std::vector<bool> pos_free_, row_pos_free_;
    std::vector<int> residue_use_;
    int distinct_ = 0;
    int best_ = 0;
    int lower_bound_ = 0;
    std::uint64_t nodes_ = 0;
    std::vector<int> best_col_pos_, best_row_pos_;
};

}  // namespace detail

/// Ground-truth cbs_2D by exhaustive search over column permutations and row
/// permutations with row 0 pinned to position 0 (row rotations shift every
/// residue uniformly, so the pin loses no solutions). Branch-and-bound prunes
/// partial assignments whose committed residue count reaches the incumbent;
/// pass prune=false for the plain enumeration oracle.
inline ExactResult exact_cbs2d(const PatternMatrix& A, int limit = 8, bool prune = true) {
    if (A.n() > limit)
        throw std::invalid_argument("matrix order " + std::to_string(A.n()) +
                                    " exceeds the exact-search limit " + std::to_string(limit));
    detail::ExactSearch search(A);
    ExactResult r = search.run(prune);
    r.method = prune ? "branch-and-bound" : "brute-force";
    return r;
}

/// Writes the binary program for the diagonal-packing objective in LP format:
/// assignment constraints for the row/column position variables, one
/// activation constraint per (nonzero, position pair), and the symmetry break
/// p_0_0 = 1. Variables: p_i_i', q_j_j', z_k.
inline void export_ilp(const PatternMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    const int n = A.n();
    // keep lines short for parsers with legacy line-length limits
    const auto sum_line = [&out](const std::string& head, const std::function<std::string(int)>& term,
                                 int count, const std::string& tail) {
        out << head;
        for (int t = 0; t < count; ++t) {
            out << (t ? " + " : " ") << term(t);
            if (t % 12 == 11 && t + 1 < count) out << "\n  ";
        }
        out << tail;
    };
    out << "\\ Diagonal packing model: " << n << "x" << n << ", " << A.nnz() << " nonzeros\n";
    out << "Minimize\n";
    sum_line(" obj:", [](int k) { return "z_" + std::to_string(k); }, n, "\n");
    out << "Subject To\n";
    for (int i = 0; i < n; ++i)
        sum_line(" row_map_" + std::to_string(i) + ":",
                 [&](int p) { return "p_" + std::to_string(i) + "_" + std::to_string(p); }, n, " = 1\n");
    for (int p = 0; p < n; ++p)
        sum_line(" row_pos_" + std::to_string(p) + ":",
                 [&](int i) { return "p_" + std::to_string(i) + "_" + std::to_string(p); }, n, " = 1\n");
    for (int j = 0; j < n; ++j)
        sum_line(" col_map_" + std::to_string(j) + ":",
                 [&](int p) { return "q_" + std::to_string(j) + "_" + std::to_string(p); }, n, " = 1\n");
    for (int p = 0; p < n; ++p)
        sum_line(" col_pos_" + std::to_string(p) + ":",
                 [&](int j) { return "q_" + std::to_string(j) + "_" + std::to_string(p); }, n, " = 1\n");
    long act = 0;
    for (const Coord& c : A.coords()) {
        for (int ip = 0; ip < n; ++ip) {
            for (int jp = 0; jp < n; ++jp) {
                const int k = (jp + n - ip) % n;
                out << " act_" << act++ << ": z_" << k << " - p_" << c.row << "_" << ip << " - q_"
                    << c.col << "_" << jp << " >= -1\n";
            }
        }
    }
    out << " fix_origin: p_0_0 = 1\n";
    out << "Binary\n";
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) out << " p_" << i << "_" << p << "\n";
    for (int j = 0; j < n; ++j)
        for (int p = 0; p < n; ++p) out << " q_" << j << "_" << p << "\n";
    for (int k = 0; k < n; ++k) out << " z_" << k << "\n";
    out << "End\n";
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace diagpack
