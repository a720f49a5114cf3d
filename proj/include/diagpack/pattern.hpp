#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "diagpack/rng.hpp"

namespace diagpack {

/// A row/column coordinate with an optional numeric value.
struct Coord {
    int row = 0;
    int col = 0;
    double val = 1.0;

    bool operator==(const Coord&) const = default;
};

/// Square sparse nonzero pattern with row-wise and column-wise adjacency.
/// Immutable after construction; safe to share read-only across threads.
/// Values are carried only when the matrix was built in valued mode; the
/// reordering algorithms never look at them.
class PatternMatrix {
public:
    PatternMatrix() = default;

    /// Builds from a coordinate list. Duplicate coordinates are merged
    /// (pattern union; the last value wins in valued mode).
    static PatternMatrix from_coords(int n, std::vector<Coord> coords, bool with_values = false) {
        if (n < 0) throw std::invalid_argument("matrix order must be non-negative");
        for (const Coord& c : coords) {
            if (c.row < 0 || c.row >= n || c.col < 0 || c.col >= n)
                throw std::out_of_range("coordinate outside matrix");
        }
        std::sort(coords.begin(), coords.end(), [](const Coord& a, const Coord& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        PatternMatrix m;
        m.n_ = n;
        m.row_adj_.assign(n, {});
        m.col_adj_.assign(n, {});
        if (with_values) m.row_val_.assign(n, {});
        for (std::size_t i = 0; i < coords.size(); ++i) {
            const Coord& c = coords[i];
            if (i + 1 < coords.size() && coords[i + 1].row == c.row && coords[i + 1].col == c.col)
                continue;  // merged duplicate
            m.row_adj_[c.row].push_back(c.col);
            m.col_adj_[c.col].push_back(c.row);
            if (with_values) m.row_val_[c.row].push_back(c.val);
            ++m.nnz_;
        }
        return m;
    }

    int n() const { return n_; }
    std::int64_t nnz() const { return nnz_; }
    bool has_values() const { return !row_val_.empty(); }

    const std::vector<int>& row(int i) const { return row_adj_[i]; }
    const std::vector<int>& col(int j) const { return col_adj_[j]; }
    const std::vector<double>& row_values(int i) const { return row_val_[i]; }

    int row_degree(int i) const { return static_cast<int>(row_adj_[i].size()); }
    int col_degree(int j) const { return static_cast<int>(col_adj_[j].size()); }

    /// max over all row and column degrees; the trivial objective lower bound.
    int max_degree() const {
        int d = 0;
        for (int i = 0; i < n_; ++i) d = std::max(d, row_degree(i));
        for (int j = 0; j < n_; ++j) d = std::max(d, col_degree(j));
        return d;
    }

    bool has_entry(int i, int j) const {
        const auto& r = row_adj_[i];
        return std::binary_search(r.begin(), r.end(), j);
    }

    /// Value at (i,j), 0 when the entry is absent. Requires valued mode.
    double value_at(int i, int j) const {
        const auto& r = row_adj_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j);
        if (it == r.end() || *it != j) return 0.0;
        return row_val_[i][static_cast<std::size_t>(it - r.begin())];
    }

    std::vector<Coord> coords() const {
        std::vector<Coord> out;
        out.reserve(static_cast<std::size_t>(nnz_));
        for (int i = 0; i < n_; ++i)
            for (std::size_t t = 0; t < row_adj_[i].size(); ++t)
                out.push_back({i, row_adj_[i][t], has_values() ? row_val_[i][t] : 1.0});
        return out;
    }

    /// Transpose consistency and sortedness check; throws on violation.
    void check_invariants() const {
        std::int64_t count_r = 0, count_c = 0;
        for (int i = 0; i < n_; ++i) {
            if (!std::is_sorted(row_adj_[i].begin(), row_adj_[i].end()) ||
                std::adjacent_find(row_adj_[i].begin(), row_adj_[i].end()) != row_adj_[i].end())
                throw std::logic_error("row adjacency not strictly increasing");
            count_r += row_degree(i);
        }
        for (int j = 0; j < n_; ++j) {
            if (!std::is_sorted(col_adj_[j].begin(), col_adj_[j].end()) ||
                std::adjacent_find(col_adj_[j].begin(), col_adj_[j].end()) != col_adj_[j].end())
                throw std::logic_error("col adjacency not strictly increasing");
            count_c += col_degree(j);
            for (int i : col_adj_[j])
                if (!has_entry(i, j)) throw std::logic_error("transpose inconsistency");
        }
        if (count_r != nnz_ || count_c != nnz_) throw std::logic_error("nnz mismatch");
    }

private:
    int n_ = 0;
    std::int64_t nnz_ = 0;
    std::vector<std::vector<int>> row_adj_;
    std::vector<std::vector<int>> col_adj_;
    std::vector<std::vector<double>> row_val_;
};

/// A bijection on {0..n-1} stored with its inverse.
/// forward[old_index] = new_position, inverse[new_position] = old_index.
struct Permutation {
    std::vector<int> forward;
    std::vector<int> inverse;

    Permutation() = default;

    static Permutation identity(int n) {
        Permutation p;
        p.forward.resize(n);
        p.inverse.resize(n);
        std::iota(p.forward.begin(), p.forward.end(), 0);
        std::iota(p.inverse.begin(), p.inverse.end(), 0);
        return p;
    }

    static Permutation from_forward(std::vector<int> fwd) {
        const int n = static_cast<int>(fwd.size());
        Permutation p;
        p.forward = std::move(fwd);
        p.inverse.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            int pos = p.forward[i];
            if (pos < 0 || pos >= n || p.inverse[pos] != -1)
                throw std::invalid_argument("not a bijection");
            p.inverse[pos] = i;
        }
        return p;
    }

    /// Sequence form: order[t] is the element placed at position t.
    static Permutation from_order(const std::vector<int>& order) {
        const int n = static_cast<int>(order.size());
        std::vector<int> fwd(n, -1);
        for (int t = 0; t < n; ++t) {
            if (order[t] < 0 || order[t] >= n || fwd[order[t]] != -1)
                throw std::invalid_argument("not a bijection");
            fwd[order[t]] = t;
        }
        return from_forward(std::move(fwd));
    }

    static Permutation random(int n, Rng& rng) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng_shuffle(rng, order);
        return from_order(order);
    }

    int size() const { return static_cast<int>(forward.size()); }

    Permutation inverted() const {
        Permutation p;
        p.forward = inverse;
        p.inverse = forward;
        return p;
    }

    bool operator==(const Permutation& o) const { return forward == o.forward; }
};

/// Per-diagonal nonzero histogram plus derived statistics.
/// diag_nnz[k] counts nonzeros with (col_pos - row_pos) mod n == k.
struct DiagState {
    std::vector<int> diag_nnz;
    int num_diags = 0;       // diagonals with at least one nonzero
    int min_nnz = 0;         // minimum positive occupancy (0 iff empty matrix)
    int min_nnz_count = 0;   // diagonals attaining min_nnz

    void recompute_stats() {
        num_diags = 0;
        min_nnz = 0;
        min_nnz_count = 0;
        for (int c : diag_nnz) {
            if (c <= 0) continue;
            ++num_diags;
            if (min_nnz == 0 || c < min_nnz) {
                min_nnz = c;
                min_nnz_count = 1;
            } else if (c == min_nnz) {
                ++min_nnz_count;
            }
        }
    }

    bool operator==(const DiagState& o) const {
        return diag_nnz == o.diag_nnz && num_diags == o.num_diags && min_nnz == o.min_nnz &&
               min_nnz_count == o.min_nnz_count;
    }
};

inline int diag_index(int row_pos, int col_pos, int n) {
    return (col_pos + n - row_pos) % n;
}

/// Counts nonzeros per cyclic diagonal of the matrix permuted by (pr, pc).
inline DiagState count_diagonals(const PatternMatrix& A, const Permutation& pr, const Permutation& pc) {
    const int n = A.n();
    if (pr.size() != n || pc.size() != n)
        throw std::invalid_argument("permutation size does not match matrix order");
    DiagState s;
    s.diag_nnz.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const int rp = pr.forward[i];
        for (int j : A.row(i)) ++s.diag_nnz[diag_index(rp, pc.forward[j], n)];
    }
    s.recompute_stats();
    return s;
}

/// Materializes A' with a nonzero at (pr(i), pc(j)) iff A has one at (i,j).
inline PatternMatrix apply_permutations(const PatternMatrix& A, const Permutation& pr, const Permutation& pc) {
    const int n = A.n();
    if (pr.size() != n || pc.size() != n)
        throw std::invalid_argument("permutation size does not match matrix order");
    std::vector<Coord> coords = A.coords();
    for (Coord& c : coords) {
        c.row = pr.forward[c.row];
        c.col = pc.forward[c.col];
    }
    return PatternMatrix::from_coords(n, std::move(coords), A.has_values());
}

}  // namespace diagpack
