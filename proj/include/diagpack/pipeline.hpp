#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diagpack/eigen_order.hpp"
#include "diagpack/optimizer.hpp"
#include "diagpack/orderings.hpp"
#include "diagpack/pattern.hpp"
#include "diagpack/symmetrize.hpp"

namespace diagpack {

enum class OrderingKind { Natural, Rcm, Mp, Lbs, Eigen };
enum class OptLevel { NoOpt, TwoOpt, ThreeOpt };

inline const char* to_string(OrderingKind k) {
    switch (k) {
        case OrderingKind::Natural: return "natural";
        case OrderingKind::Rcm: return "rcm";
        case OrderingKind::Mp: return "mp";
        case OrderingKind::Lbs: return "lbs";
        case OrderingKind::Eigen: return "eigen";
    }
    return "?";
}

inline const char* to_string(SymMode m) {
    return m == SymMode::PatternSum ? "pattern" : "bipartite";
}

inline const char* to_string(OptLevel l) {
    switch (l) {
        case OptLevel::NoOpt: return "noopt";
        case OptLevel::TwoOpt: return "2opt";
        case OptLevel::ThreeOpt: return "3opt";
    }
    return "?";
}

struct PipelineConfig {
    int ppn_patience = 5;
    int nev = 200;
    OptimizerConfig opt;
};

struct InitialPair {
    Permutation pr, pc;
    int num_diags = 0;
};

/// Initial permutation pair for one (ordering, symmetrization) choice.
/// Pattern-sum orderings place rows and columns identically; bipartite
/// orderings split the 2n-vertex ordering into distinct row/column maps.
inline InitialPair initial_ordering(const PatternMatrix& A, OrderingKind kind, SymMode sym,
                                    const PipelineConfig& cfg = {}) {
    InitialPair out;
    if (kind == OrderingKind::Natural) {
        out.pr = Permutation::identity(A.n());
        out.pc = Permutation::identity(A.n());
        out.num_diags = count_diagonals(A, out.pr, out.pc).num_diags;
        return out;
    }
    if (kind == OrderingKind::Eigen) {
        LanczosOptions lopt;
        lopt.seed = cfg.opt.seed;
        EigenOrderResult r = eigen_order(A, sym, cfg.nev, lopt);
        out.pr = std::move(r.pr);
        out.pc = std::move(r.pc);
        out.num_diags = r.num_diags;
        return out;
    }
    const SymmetrizedGraph g = symmetrize(A, sym);
    const int root = pseudo_peripheral_node(g, components_by_size(g).front().front(), cfg.ppn_patience);
    std::vector<int> order;
    switch (kind) {
        case OrderingKind::Rcm: order = rcm_order(g, root); break;
        case OrderingKind::Mp: order = mp_order(g, root); break;
        case OrderingKind::Lbs: order = lbs_order(g, root); break;
        default: throw std::logic_error("unreachable ordering kind");
    }
    if (sym == SymMode::PatternSum) {
        out.pr = Permutation::from_order(order);
        out.pc = out.pr;
    } else {
        std::tie(out.pr, out.pc) = split_bipartite_order(order, A.n());
    }
    out.num_diags = count_diagonals(A, out.pr, out.pc).num_diags;
    return out;
}

struct VariantOutcome {
    Permutation pr, pc;
    int init_diags = 0;   // after the initial ordering
    int final_diags = 0;  // after optimization
    std::vector<PassRecord> trace;
    int accepted_2opt = 0;
    int accepted_3opt = 0;
};

inline VariantOutcome run_variant(const PatternMatrix& A, OrderingKind kind, SymMode sym, OptLevel level,
                                  const PipelineConfig& cfg = {}) {
    InitialPair init = initial_ordering(A, kind, sym, cfg);
    VariantOutcome out;
    out.init_diags = init.num_diags;
    if (level == OptLevel::NoOpt) {
        out.pr = std::move(init.pr);
        out.pc = std::move(init.pc);
        out.final_diags = init.num_diags;
        return out;
    }
    OptimizerConfig ocfg = cfg.opt;
    ocfg.enable_3opt = (level == OptLevel::ThreeOpt);
    OptResult r = optimize(A, init.pr, init.pc, ocfg);
    out.pr = std::move(r.pr);
    out.pc = std::move(r.pc);
    out.final_diags = r.state.num_diags;
    out.trace = std::move(r.trace);
    out.accepted_2opt = r.accepted_2opt;
    out.accepted_3opt = r.accepted_3opt;
    return out;
}

/// The singleton (ordering, symmetrization) grid: natural plus each BFS-based
/// ordering under both symmetrizations; eigen optionally appended.
inline std::vector<std::pair<OrderingKind, SymMode>> singleton_grid(bool include_eigen) {
    std::vector<std::pair<OrderingKind, SymMode>> g = {
        {OrderingKind::Natural, SymMode::PatternSum},
        {OrderingKind::Rcm, SymMode::PatternSum},
        {OrderingKind::Rcm, SymMode::Bipartite},
        {OrderingKind::Mp, SymMode::PatternSum},
        {OrderingKind::Mp, SymMode::Bipartite},
        {OrderingKind::Lbs, SymMode::PatternSum},
        {OrderingKind::Lbs, SymMode::Bipartite},
    };
    if (include_eigen) {
        g.push_back({OrderingKind::Eigen, SymMode::PatternSum});
        g.push_back({OrderingKind::Eigen, SymMode::Bipartite});
    }
    return g;
}

/// Runs every singleton at the given level and returns the best outcome
/// (ties keep the first grid entry, so results are reproducible).
inline VariantOutcome run_best_of_all(const PatternMatrix& A, OptLevel level, const PipelineConfig& cfg,
                                      bool include_eigen = false, std::string* chosen = nullptr) {
    VariantOutcome best;
    bool have = false;
    for (const auto& [kind, sym] : singleton_grid(include_eigen)) {
        if (kind == OrderingKind::Eigen && cfg.nev > symmetrize(A, sym).m) continue;
        VariantOutcome r = run_variant(A, kind, sym, level, cfg);
        if (!have || r.final_diags < best.final_diags) {
            best = std::move(r);
            have = true;
            if (chosen) *chosen = std::string(to_string(kind)) + "-" + to_string(sym);
        }
    }
    if (!have) throw std::logic_error("no variant produced a result");
    return best;
}

}  // namespace diagpack
