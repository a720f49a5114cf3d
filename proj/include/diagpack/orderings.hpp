#pragma once

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <vector>

#include "diagpack/rng.hpp"
#include "diagpack/symmetrize.hpp"

namespace diagpack {

/// BFS level structure rooted at `root`, covering root's component only.
struct BfsLevels {
    int root = 0;
    std::vector<std::vector<int>> levels;  // levels[0] == {root}; each level sorted by id
    int depth() const { return static_cast<int>(levels.size()); }
};

inline BfsLevels bfs_levels(const SymmetrizedGraph& g, int root) {
    if (root < 0 || root >= g.m) throw std::out_of_range("BFS root out of range");
    BfsLevels out;
    out.root = root;
    std::vector<int> dist(g.m, -1);
    std::vector<int> frontier{root};
    dist[root] = 0;
    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        out.levels.push_back(frontier);
        std::vector<int> next;
        for (int v : frontier)
            for (int w : g.adj[v])
                if (dist[w] == -1) {
                    dist[w] = dist[v] + 1;
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    return out;
}

/// Chases farthest BFS levels until the depth stops improving for `patience`
/// consecutive rounds. The farthest-level pick is the smallest id unless a
/// seeded RNG is supplied.
inline int pseudo_peripheral_node(const SymmetrizedGraph& g, int start, int patience = 5,
                                  Rng* rng = nullptr) {
    if (g.m == 0) throw std::invalid_argument("empty graph");
    if (start < 0 || start >= g.m) throw std::out_of_range("start vertex out of range");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
    int u = start;
    int best_depth = 0;
    int streak = 0;
    while (streak < patience) {
        BfsLevels lv = bfs_levels(g, u);
        if (lv.depth() > best_depth) {
            best_depth = lv.depth();
            streak = 0;
        } else {
            ++streak;
        }
        const auto& far = lv.levels.back();
        u = rng ? far[rng_below(*rng, far.size())] : far.front();
    }
    return u;
}

namespace detail {

// Root for each component: the caller's root where applicable, otherwise a
// pseudo-peripheral node found from the component's smallest id.
inline int component_root(const SymmetrizedGraph& g, const std::vector<int>& comp, int wanted_root) {
    if (std::binary_search(comp.begin(), comp.end(), wanted_root)) return wanted_root;
    return pseudo_peripheral_node(g, comp.front());
}

}  // namespace detail

/// Reverse Cuthill-McKee: BFS enqueuing unvisited neighbors by increasing
/// degree (ties by id), reversed per component. Components are emitted in
/// decreasing size order.
inline std::vector<int> rcm_order(const SymmetrizedGraph& g, int root) {
    if (root < 0 || root >= g.m) throw std::out_of_range("root out of range");
    std::vector<int> order;
    order.reserve(g.m);
    std::vector<char> visited(g.m, 0);
    for (const auto& comp : components_by_size(g)) {
        const int r = detail::component_root(g, comp, root);
        std::vector<int> cm;
        cm.reserve(comp.size());
        std::queue<int> q;
        q.push(r);
        visited[r] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            cm.push_back(v);
            std::vector<int> nbrs;
            for (int w : g.adj[v])
                if (!visited[w]) {
                    visited[w] = 1;
                    nbrs.push_back(w);
                }
            std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
                if (g.degree(a) != g.degree(b)) return g.degree(a) < g.degree(b);
                return a < b;
            });
            for (int w : nbrs) q.push(w);
        }
        order.insert(order.end(), cm.rbegin(), cm.rend());
    }
    return order;
}

/// Miller-Pritikin: even BFS levels first, then odd levels; within a level
/// vertices appear in ascending id.
inline std::vector<int> mp_order(const SymmetrizedGraph& g, int root) {
    if (root < 0 || root >= g.m) throw std::out_of_range("root out of range");
    std::vector<int> order;
    order.reserve(g.m);
    for (const auto& comp : components_by_size(g)) {
        const int r = detail::component_root(g, comp, root);
        BfsLevels lv = bfs_levels(g, r);
        for (int parity = 0; parity < 2; ++parity)
            for (int d = parity; d < lv.depth(); d += 2)
                order.insert(order.end(), lv.levels[d].begin(), lv.levels[d].end());
    }
    return order;
}

/// Level-based sweep: repeatedly scans levels 1..d-1, labeling vertices and
/// flagging their unlabeled neighbors for the rest of the sweep, which pushes
/// consecutive labels far apart. The root's labeling counts as the first
/// labeling event of sweep one, so its neighbors start that sweep flagged;
/// this is what makes the output coincide with mp_order on grid graphs.
inline std::vector<int> lbs_order(const SymmetrizedGraph& g, int root) {
    if (root < 0 || root >= g.m) throw std::out_of_range("root out of range");
    std::vector<int> order;
    order.reserve(g.m);
    std::vector<int> flag(g.m, 0);
    std::vector<char> labeled(g.m, 0);
    int sweep_id = 0;
    for (const auto& comp : components_by_size(g)) {
        const int r = detail::component_root(g, comp, root);
        BfsLevels lv = bfs_levels(g, r);
        std::size_t remaining = comp.size();
        order.push_back(r);
        labeled[r] = 1;
        --remaining;
        bool first_sweep = true;
        while (remaining > 0) {
            ++sweep_id;
            if (first_sweep) {
                for (int w : g.adj[r])
                    if (!labeled[w]) flag[w] = sweep_id;
                first_sweep = false;
            }
            for (int d = 1; d < lv.depth(); ++d) {
                for (int v : lv.levels[d]) {
                    if (labeled[v] || flag[v] == sweep_id) continue;
                    order.push_back(v);
                    labeled[v] = 1;
                    --remaining;
                    for (int w : g.adj[v])
                        if (!labeled[w]) flag[w] = sweep_id;
                }
            }
        }
    }
    return order;
}

}  // namespace diagpack
