#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "diagpack/cost_model.hpp"
#include "diagpack/pipeline.hpp"

namespace diagpack {

struct VariantResult {
    std::string matrix_id;
    std::string sym;       // "pattern", "bipartite", "-" for natural, "*" for combined
    std::string ordering;  // "natural", "rcm", "mp", "lbs", "eigen", "*"
    std::string opt;       // "noopt", "2opt", "3opt"
    int num_diags_init = 0;
    int num_diags_final = 0;
    double elapsed_s = 0.0;
    double estimated_spmv_us = 0.0;
    bool failed = false;
    std::string error;

    std::string variant_key() const { return sym + "." + ordering + "+" + opt; }
};

struct HarnessConfig {
    PipelineConfig pipeline;
    CostModel cost;
    bool include_eigen = false;
    std::vector<OptLevel> levels = {OptLevel::NoOpt, OptLevel::TwoOpt, OptLevel::ThreeOpt};
};

/// Runs every singleton variant on one matrix and synthesizes the per-level
/// combined "*" rows as the best singleton at that level. Failures are
/// recorded per variant; the remaining variants still run.
inline std::vector<VariantResult> run_matrix(const PatternMatrix& A, const std::string& matrix_id,
                                             const HarnessConfig& cfg) {
    std::vector<VariantResult> out;
    for (OptLevel level : cfg.levels) {
        std::size_t best = out.size();  // sentinel: no successful singleton yet
        bool have_best = false;
        double level_elapsed = 0.0;
        for (const auto& [kind, sym] : singleton_grid(cfg.include_eigen)) {
            VariantResult r;
            r.matrix_id = matrix_id;
            r.ordering = to_string(kind);
            r.sym = kind == OrderingKind::Natural ? "-" : to_string(sym);
            r.opt = to_string(level);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                VariantOutcome v = run_variant(A, kind, sym, level, cfg.pipeline);
                r.num_diags_init = v.init_diags;
                r.num_diags_final = v.final_diags;
                r.estimated_spmv_us = estimate_time_us(v.final_diags, A.n(), cfg.cost);
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
            }
            r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            level_elapsed += r.elapsed_s;
            out.push_back(std::move(r));
            if (!out.back().failed &&
                (!have_best || out.back().num_diags_final < out[best].num_diags_final)) {
                best = out.size() - 1;
                have_best = true;
            }
        }
        if (have_best) {
            VariantResult star = out[best];
            star.sym = "*";
            star.ordering = "*";
            star.elapsed_s = level_elapsed;  // cost of trying every singleton
            out.push_back(std::move(star));
        }
    }
    return out;
}

struct LeaderboardRow {
    std::string variant;
    int win_count = 0;
    double win_percent = 0.0;
    double avg_rank = 0.0;
    double amean_vs_nat_noopt = 0.0;
    double max_vs_nat_noopt = 0.0;
    double amean_vs_nat_3opt = 0.0;
    double max_vs_nat_3opt = 0.0;
};

/// Win counts (ties all win), competition average ranks, and diagonal-count
/// ratios normalized against the natural-order baselines.
inline std::vector<LeaderboardRow> leaderboard(const std::vector<VariantResult>& results) {
    std::map<std::string, std::map<std::string, int>> per_matrix;  // matrix -> variant -> count
    std::set<std::string> variants;
    for (const VariantResult& r : results) {
        if (r.failed) continue;
        per_matrix[r.matrix_id][r.variant_key()] = r.num_diags_final;
        variants.insert(r.variant_key());
    }
    const std::string base_noopt = "-.natural+noopt";
    const std::string base_3opt = "-.natural+3opt";

    std::vector<LeaderboardRow> rows;
    for (const std::string& v : variants) {
        LeaderboardRow row;
        row.variant = v;
        int matrices_seen = 0;
        double rank_sum = 0.0;
        double ratio_sum_a = 0.0, ratio_max_a = 0.0;
        int ratio_n_a = 0;
        double ratio_sum_b = 0.0, ratio_max_b = 0.0;
        int ratio_n_b = 0;
        for (const auto& [mid, counts] : per_matrix) {
            auto it = counts.find(v);
            if (it == counts.end()) continue;
            ++matrices_seen;
            int mine = it->second;
            int best = mine, strictly_better = 0;
            for (const auto& [ov, oc] : counts) {
                best = std::min(best, oc);
                if (oc < mine) ++strictly_better;
            }
            if (mine == best) ++row.win_count;
            rank_sum += 1 + strictly_better;
            if (auto b = counts.find(base_noopt); b != counts.end() && mine > 0) {
                const double ratio = static_cast<double>(b->second) / mine;
                ratio_sum_a += ratio;
                ratio_max_a = std::max(ratio_max_a, ratio);
                ++ratio_n_a;
            }
            if (auto b = counts.find(base_3opt); b != counts.end() && mine > 0) {
                const double ratio = static_cast<double>(b->second) / mine;
                ratio_sum_b += ratio;
                ratio_max_b = std::max(ratio_max_b, ratio);
                ++ratio_n_b;
            }
        }
        if (matrices_seen == 0) continue;
        row.win_percent = 100.0 * row.win_count / matrices_seen;
        row.avg_rank = rank_sum / matrices_seen;
        row.amean_vs_nat_noopt = ratio_n_a ? ratio_sum_a / ratio_n_a : 0.0;
        row.max_vs_nat_noopt = ratio_max_a;
        row.amean_vs_nat_3opt = ratio_n_b ? ratio_sum_b / ratio_n_b : 0.0;
        row.max_vs_nat_3opt = ratio_max_b;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
        if (a.win_count != b.win_count) return a.win_count > b.win_count;
        return a.variant < b.variant;
    });
    return rows;
}

struct ProfilePoint {
    std::string variant;
    double tau = 1.0;
    double fraction = 0.0;
};

/// For each variant and tolerance tau: the fraction of matrices on which the
/// variant's count is at most tau times the per-matrix best.
inline std::vector<ProfilePoint> performance_profile(const std::vector<VariantResult>& results,
                                                     const std::vector<std::string>& variant_subset,
                                                     const std::vector<double>& taus) {
    for (double t : taus)
        if (t < 1.0) throw std::invalid_argument("tau gridpoints must be >= 1");
    std::map<std::string, std::map<std::string, int>> per_matrix;
    for (const VariantResult& r : results) {
        if (r.failed) continue;
        per_matrix[r.matrix_id][r.variant_key()] = r.num_diags_final;
    }
    std::map<std::string, int> best;
    for (const auto& [mid, counts] : per_matrix) {
        int b = -1;
        for (const auto& [v, c] : counts)
            if (b < 0 || c < b) b = c;
        best[mid] = b;
    }
    std::vector<ProfilePoint> out;
    const double total = static_cast<double>(per_matrix.size());
    for (const std::string& v : variant_subset) {
        for (double tau : taus) {
            int hit = 0;
            for (const auto& [mid, counts] : per_matrix) {
                auto it = counts.find(v);
                if (it != counts.end() && it->second <= tau * best[mid]) ++hit;
            }
            out.push_back({v, tau, total > 0 ? hit / total : 0.0});
        }
    }
    return out;
}

struct FilterDecision {
    bool include = false;
    std::string rule;  // which rule decided
};

/// Keeps matrices whose natural diagonal count leaves room for optimization
/// (more than 4x the degree lower bound). Size and density gates reproduce
/// the collection-level selection and are applied only on request.
inline FilterDecision dataset_filter(const PatternMatrix& A, bool apply_size_gates = false) {
    const int n = A.n();
    if (apply_size_gates) {
        if (n < 10000 || n > 50000) return {false, "size-gate"};
        const double sigma = n > 0 ? static_cast<double>(A.nnz()) / n : 0.0;
        if (sigma < 3.0 || sigma > 20.0) return {false, "density-gate"};
    }
    const int natural = count_diagonals(A, Permutation::identity(n), Permutation::identity(n)).num_diags;
    if (natural > 4 * A.max_degree()) return {true, "diag-rule"};
    return {false, "diag-rule"};
}

inline std::string leaderboard_csv(const std::vector<LeaderboardRow>& rows) {
    std::ostringstream os;
    os << "variant,win_count,win_percent,avg_rank,amean_vs_nat_noopt,max_vs_nat_noopt,"
          "amean_vs_nat_3opt,max_vs_nat_3opt\n";
    for (const LeaderboardRow& r : rows) {
        os << r.variant << ',' << r.win_count << ',' << r.win_percent << ',' << r.avg_rank << ','
           << r.amean_vs_nat_noopt << ',' << r.max_vs_nat_noopt << ',' << r.amean_vs_nat_3opt << ','
           << r.max_vs_nat_3opt << '\n';
    }
    return os.str();
}

inline std::string profile_csv(const std::vector<ProfilePoint>& points) {
    std::ostringstream os;
    os << "variant,tau,fraction\n";
    for (const ProfilePoint& p : points) os << p.variant << ',' << p.tau << ',' << p.fraction << '\n';
    return os.str();
}

}  // namespace diagpack
