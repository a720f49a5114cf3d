#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diagpack/cost_model.hpp"
#include "diagpack/pattern.hpp"

namespace diagpack {

/// Result of the dense row/column elimination search.
struct EliminationPlan {
    std::vector<int> dense_rows;
    std::vector<int> dense_cols;
    PatternMatrix core;        // input matrix with the selected rows/columns emptied
    int diags_before = 0;      // optimized diagonal count without elimination
    int diags_after = 0;       // optimized diagonal count of the core
    double overhead_us = 0.0;
    double gain_us = 0.0;
    double gain_us_no_split = 0.0;
    bool profitable = false;
    Permutation core_pr, core_pc;  // best permutations found for the core
};

/// Estimated multiplication time when an elimination plan is in effect: the
/// core's diagonal-sum cost plus the dense row/column handling overhead.
inline double estimate_time_us(int num_diags, int n, const CostModel& cm, const EliminationPlan& plan);

/// Returns A with every nonzero in rows `dr` and columns `dc` erased.
inline PatternMatrix dissect(const PatternMatrix& A, const std::vector<int>& dr,
                             const std::vector<int>& dc) {
    const int n = A.n();
    std::vector<char> kill_row(n, 0), kill_col(n, 0);
    for (int i : dr) {
        if (i < 0 || i >= n) throw std::out_of_range("dense row index out of range");
        kill_row[i] = 1;
    }
    for (int j : dc) {
        if (j < 0 || j >= n) throw std::out_of_range("dense column index out of range");
        kill_col[j] = 1;
    }
    std::vector<Coord> keep;
    keep.reserve(static_cast<std::size_t>(A.nnz()));
    for (const Coord& c : A.coords())
        if (!kill_row[c.row] && !kill_col[c.col]) keep.push_back(c);
    return PatternMatrix::from_coords(n, std::move(keep), A.has_values());
}

/// Rebuilds y = A*x from the core product. Dense rows are full dot products
/// against the original rows; dense columns add their scaled contributions to
/// every surviving row. A nonzero lying in both an eliminated row and column
/// is handled by the row path alone.
inline std::vector<double> assemble_result(const std::vector<double>& core_y, const PatternMatrix& A,
                                           const std::vector<double>& x, const std::vector<int>& dr,
                                           const std::vector<int>& dc) {
    const int n = A.n();
    if (!A.has_values()) throw std::invalid_argument("assemble_result requires a valued matrix");
    if (static_cast<int>(core_y.size()) != n || static_cast<int>(x.size()) != n)
        throw std::invalid_argument("vector length mismatch");
    std::vector<char> in_dr(n, 0);
    for (int i : dr) in_dr[i] = 1;
    std::vector<double> y = core_y;
    for (int j : dc) {
        for (int i : A.col(j)) {
            if (in_dr[i]) continue;
            y[i] += A.value_at(i, j) * x[j];
        }
    }
    for (int i : dr) {
        double dot = 0.0;
        const auto& cols = A.row(i);
        const auto& vals = A.row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) dot += vals[t] * x[cols[t]];
        y[i] = dot;
    }
    return y;
}

/// An optimization pipeline the plan search can call on candidate cores:
/// returns the best diagonal count found within the budget plus the
/// witnessing permutations.
struct PipelineResult {
    int num_diags = 0;
    Permutation pr, pc;
};
using OptimizeFn = std::function<PipelineResult(const PatternMatrix&, double budget_s)>;

struct PlanSearchConfig {
    int patience = 10;
    double per_candidate_budget_s = 60.0;
    double final_budget_s = 3600.0;
};

/// Greedy-by-degree elimination search: candidates are rows and columns in
/// decreasing degree order; each prefix is dissected, the core optimized with
/// a reduced budget, and the modeled profit tracked. Stops after `patience`
/// consecutive non-improving prefixes or when candidate degrees fall below
/// the core's average degree. The winning core is re-optimized with the full
/// budget before the plan is returned.
inline EliminationPlan select_and_plan(const PatternMatrix& A, const CostModel& cm,
                                       const OptimizeFn& optimize_fn,
                                       const PlanSearchConfig& cfg = {}) {
    cm.validate();
    if (cfg.patience < 1) throw std::invalid_argument("patience must be >= 1");
    const int n = A.n();

    struct Candidate {
        bool is_row;
        int index;
        int degree;
    };
    std::vector<Candidate> cands;
    cands.reserve(static_cast<std::size_t>(2) * n);
    for (int i = 0; i < n; ++i)
        if (A.row_degree(i) > 0) cands.push_back({true, i, A.row_degree(i)});
    for (int j = 0; j < n; ++j)
        if (A.col_degree(j) > 0) cands.push_back({false, j, A.col_degree(j)});
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.degree != b.degree) return a.degree > b.degree;
        if (a.index != b.index) return a.index < b.index;
        return a.is_row && !b.is_row;
    });

    const PipelineResult base = optimize_fn(A, cfg.per_candidate_budget_s);

    EliminationPlan best;
    best.core = A;
    best.diags_before = base.num_diags;
    best.diags_after = base.num_diags;
    best.core_pr = base.pr;
    best.core_pc = base.pc;
    double best_profit = 0.0;

    std::vector<int> dr, dc;
    int since_improved = 0;
    for (std::size_t k = 0; k < cands.size(); ++k) {
        const Candidate& c = cands[k];
        if (c.is_row) dr.push_back(c.index);
        else dc.push_back(c.index);
        PatternMatrix core = dissect(A, dr, dc);
        if (static_cast<double>(c.degree) < static_cast<double>(core.nnz()) / n) break;

        const PipelineResult r = optimize_fn(core, cfg.per_candidate_budget_s);
        const int delta = base.num_diags - r.num_diags;
        const double overhead =
            elimination_overhead_us(static_cast<int>(dr.size()), static_cast<int>(dc.size()), n, cm);
        const double gain = elimination_gain_us(std::max(delta, 0), cm, n);
        const double profit = gain - overhead;
        if (profit > best_profit) {
            best_profit = profit;
            best.dense_rows = dr;
            best.dense_cols = dc;
            best.core = std::move(core);
            best.diags_after = r.num_diags;
            best.core_pr = r.pr;
            best.core_pc = r.pc;
            since_improved = 0;
        } else if (++since_improved >= cfg.patience) {
            break;
        }
    }

    if (!best.dense_rows.empty() || !best.dense_cols.empty()) {
        const PipelineResult final_run = optimize_fn(best.core, cfg.final_budget_s);
        if (final_run.num_diags <= best.diags_after) {
            best.diags_after = final_run.num_diags;
            best.core_pr = final_run.pr;
            best.core_pc = final_run.pc;
        }
    }
    const int delta = std::max(best.diags_before - best.diags_after, 0);
    best.overhead_us = elimination_overhead_us(static_cast<int>(best.dense_rows.size()),
                                               static_cast<int>(best.dense_cols.size()), A.n(), cm);
    best.gain_us = elimination_gain_us(delta, cm, A.n());
    best.gain_us_no_split = elimination_gain_us_no_split(delta, cm);
    best.profitable = (!best.dense_rows.empty() || !best.dense_cols.empty()) &&
                      best.overhead_us <= best.gain_us;
    return best;
}

inline double estimate_time_us(int num_diags, int n, const CostModel& cm, const EliminationPlan& plan) {
    return estimate_time_us(num_diags, n, cm) +
           elimination_overhead_us(static_cast<int>(plan.dense_rows.size()),
                                   static_cast<int>(plan.dense_cols.size()), n, cm);
}

}  // namespace diagpack
