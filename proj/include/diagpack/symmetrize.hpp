#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diagpack/pattern.hpp"

namespace diagpack {

enum class SymMode { PatternSum, Bipartite };

/// Simple undirected graph built from a matrix pattern, the input of all
/// BFS-based ordering heuristics. PatternSum joins i and j when either
/// a_{i,j} or a_{j,i} is nonzero (self-loops dropped); Bipartite joins row
/// node i with column node n+j when a_{i,j} is nonzero.
struct SymmetrizedGraph {
    SymMode mode = SymMode::PatternSum;
    int m = 0;         // vertex count: n or 2n
    int origin_n = 0;  // order of the source matrix
    std::vector<std::vector<int>> adj;

    int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

inline SymmetrizedGraph symmetrize(const PatternMatrix& A, SymMode mode) {
    const int n = A.n();
    SymmetrizedGraph g;
    g.mode = mode;
    g.origin_n = n;
    if (mode == SymMode::PatternSum) {
        g.m = n;
        g.adj.assign(n, {});
        for (int i = 0; i < n; ++i) {
            for (int j : A.row(i)) {
                if (i == j) continue;
                g.adj[i].push_back(j);
                if (!A.has_entry(j, i)) g.adj[j].push_back(i);
            }
        }
        for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    } else {
        g.m = 2 * n;
        g.adj.assign(static_cast<std::size_t>(2) * n, {});
        for (int i = 0; i < n; ++i) {
            for (int j : A.row(i)) {
                g.adj[i].push_back(n + j);
                g.adj[n + j].push_back(i);
            }
        }
        for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    }
    return g;
}

/// Splits an ordering of a bipartite graph's 2n vertices into row and column
/// permutations, preserving the relative order within each class.
inline std::pair<Permutation, Permutation> split_bipartite_order(const std::vector<int>& order, int n) {
    if (static_cast<int>(order.size()) != 2 * n)
        throw std::invalid_argument("order must cover 2n vertices");
    std::vector<int> row_fwd(n, -1), col_fwd(n, -1);
    int next_row = 0, next_col = 0;
    for (int v : order) {
        if (v < 0 || v >= 2 * n) throw std::invalid_argument("vertex id out of range");
        if (v < n) {
            if (row_fwd[v] != -1) throw std::invalid_argument("not a bijection");
            row_fwd[v] = next_row++;
        } else {
            if (col_fwd[v - n] != -1) throw std::invalid_argument("not a bijection");
            col_fwd[v - n] = next_col++;
        }
    }
    if (next_row != n || next_col != n) throw std::invalid_argument("not a bijection");
    return {Permutation::from_forward(std::move(row_fwd)), Permutation::from_forward(std::move(col_fwd))};
}

/// Connected components in decreasing size order (ties: smallest vertex id
/// first). Ordering heuristics process components one at a time and
/// concatenate the results.
inline std::vector<std::vector<int>> components_by_size(const SymmetrizedGraph& g) {
    std::vector<int> comp(g.m, -1);
    std::vector<std::vector<int>> comps;
    std::vector<int> stack;
    for (int s = 0; s < g.m; ++s) {
        if (comp[s] != -1) continue;
        const int id = static_cast<int>(comps.size());
        comps.emplace_back();
        comp[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comps[id].push_back(v);
            for (int w : g.adj[v])
                if (comp[w] == -1) {
                    comp[w] = id;
                    stack.push_back(w);
                }
        }
        std::sort(comps[id].begin(), comps[id].end());
    }
    std::stable_sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return comps;
}

}  // namespace diagpack
