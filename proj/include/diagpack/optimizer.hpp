#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diagpack/pattern.hpp"
#include "diagpack/rng.hpp"

namespace diagpack {

enum class Side { Row, Col };

struct OptimizerConfig {
    int max_passes = 100;           // global passes
    int slack = 3;                  // candidate-queue slack
    double time_budget_s = 3600.0;  // wall clock
    std::uint64_t seed = 0;
    bool enable_3opt = true;
    int rng_partner_cap = 64;  // probes per anchor

    void validate() const {
        if (max_passes < 1) throw std::invalid_argument("max_passes must be >= 1");
        if (slack < 0) throw std::invalid_argument("slack must be >= 0");
        if (time_budget_s <= 0) throw std::invalid_argument("time_budget must be > 0");
        if (rng_partner_cap < 1) throw std::invalid_argument("rng_partner_cap must be >= 1");
    }
};

/// Net effect of a probed move. `gain` equals |leaves| - |arrivals| and is
/// the exact drop in num_diags if the move is applied.
struct MoveDelta {
    int gain = 0;
    std::vector<int> leaves;    // diagonals dropping to zero
    std::vector<int> arrivals;  // diagonals rising from zero
    int new_min_nnz = 0;        // (min_nnz, min_nnz_count) if the move is applied
    int new_min_nnz_count = 0;
};

struct LeaveInfo {
    int count = 0;
    std::vector<int> diagonals;
};
using ArriveInfo = LeaveInfo;

/// Live diagonal histogram for one optimization run. Holds the current
/// permutation pair and supports O(deg) move probes with exact rollback.
/// Strictly single-threaded; see the concurrency notes in the README.
class DiagTracker {
public:
    DiagTracker(const PatternMatrix& A, Permutation pr, Permutation pc)
        : A_(&A), pr_(std::move(pr)), pc_(std::move(pc)) {
        const int n = A.n();
        if (pr_.size() != n || pc_.size() != n)
            throw std::invalid_argument("permutation size does not match matrix order");
        diag_nnz_.assign(n, 0);
        cnt_of_.assign(static_cast<std::size_t>(n) + 2, 0);
        touch_epoch_.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            const int rp = pr_.forward[i];
            for (int j : A.row(i)) ++diag_nnz_[diag_index(rp, pc_.forward[j], n)];
        }
        for (int c : diag_nnz_) {
            if (c > 0) {
                ++cnt_of_[c];
                ++num_diags_;
                if (min_nnz_ == 0 || c < min_nnz_) min_nnz_ = c;
            }
        }
    }

    const PatternMatrix& matrix() const { return *A_; }
    const Permutation& row_perm() const { return pr_; }
    const Permutation& col_perm() const { return pc_; }
    int num_diags() const { return num_diags_; }
    int min_nnz() const { return min_nnz_; }
    int min_nnz_count() const { return min_nnz_ > 0 ? cnt_of_[min_nnz_] : 0; }
    int diag_nnz(int k) const { return diag_nnz_[k]; }

    DiagState state() const {
        DiagState s;
        s.diag_nnz = diag_nnz_;
        s.num_diags = num_diags_;
        s.min_nnz = min_nnz_;
        s.min_nnz_count = min_nnz_count();
        return s;
    }

    int position(Side s, int u) const { return s == Side::Row ? pr_.forward[u] : pc_.forward[u]; }
    int degree(Side s, int u) const { return s == Side::Row ? A_->row_degree(u) : A_->col_degree(u); }

    /// Diagonals emptied if entity u were lifted from its current position.
    LeaveInfo leave_count(Side s, int u) {
        begin_probe();
        LeaveInfo info;
        lift(s, u, position(s, u), &info.diagonals);
        info.count = static_cast<int>(info.diagonals.size());
        rollback_probe();
        return info;
    }

    /// Diagonals newly occupied if entity u were moved to position q, with
    /// u's own contributions lifted out before testing emptiness.
    ArriveInfo arrive_count(Side s, int u, int q) {
        begin_probe();
        ArriveInfo info;
        lift(s, u, position(s, u), nullptr);
        place(s, u, q, &info.diagonals);
        info.count = static_cast<int>(info.diagonals.size());
        rollback_probe();
        return info;
    }

    /// True when u has a nonzero on a diagonal with occupancy in [1, thresh].
    bool touches_scarce(Side s, int u, int thresh) const {
        const int n = A_->n();
        if (s == Side::Row) {
            const int p = pr_.forward[u];
            for (int j : A_->row(u)) {
                int c = diag_nnz_[diag_index(p, pc_.forward[j], n)];
                if (c <= thresh) return true;
            }
        } else {
            const int p = pc_.forward[u];
            for (int i : A_->col(u)) {
                int c = diag_nnz_[diag_index(pr_.forward[i], p, n)];
                if (c <= thresh) return true;
            }
        }
        return false;
    }

    /// Applies the position exchange of u1 and u2 temporarily and returns the
    /// exact delta. Caller must follow with commit_probe() or rollback_probe().
    MoveDelta probe_swap(Side s, int u1, int u2) {
        assert(u1 != u2);
        const int p1 = position(s, u1), p2 = position(s, u2);
        begin_probe();
        pending_ = {s, {u1, u2, -1}, {p2, p1, -1}};
        lift(s, u1, p1, nullptr);
        place(s, u1, p2, nullptr);
        lift(s, u2, p2, nullptr);
        place(s, u2, p1, nullptr);
        return finish_delta();
    }

    /// Cyclic relocation u1: p1->p2, u2: p2->p3, u3: p3->p1, applied
    /// temporarily; same commit/rollback contract as probe_swap.
    MoveDelta probe_rotate3(Side s, int u1, int u2, int u3) {
        assert(u1 != u2 && u2 != u3 && u1 != u3);
        const int p1 = position(s, u1), p2 = position(s, u2), p3 = position(s, u3);
        begin_probe();
        pending_ = {s, {u1, u2, u3}, {p2, p3, p1}};
        lift(s, u1, p1, nullptr);
        place(s, u1, p2, nullptr);
        lift(s, u2, p2, nullptr);
        place(s, u2, p3, nullptr);
        lift(s, u3, p3, nullptr);
        place(s, u3, p1, nullptr);
        return finish_delta();
    }

    void rollback_probe() {
        assert(in_probe_);
        in_probe_ = false;
        for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) adjust(it->first, it->second);
        undo_.clear();
    }

    void commit_probe() {
        assert(in_probe_);
        in_probe_ = false;
        undo_.clear();
        Permutation& perm = pending_.side == Side::Row ? pr_ : pc_;
        for (int t = 0; t < 3; ++t) {
            if (pending_.entity[t] < 0) continue;
            perm.forward[pending_.entity[t]] = pending_.new_pos[t];
            perm.inverse[pending_.new_pos[t]] = pending_.entity[t];
        }
    }

    int probe_pre_min_nnz() const { return pre_min_; }
    int probe_pre_min_nnz_count() const { return pre_min_cnt_; }

private:
    struct Pending {
        Side side = Side::Row;
        int entity[3] = {-1, -1, -1};
        int new_pos[3] = {-1, -1, -1};
    };

    void begin_probe() {
        assert(!in_probe_);
        in_probe_ = true;
        ++epoch_;
        undo_.clear();
        pre_num_diags_ = num_diags_;
        pre_min_ = min_nnz_;
        pre_min_cnt_ = min_nnz_count();
        pending_ = {};
    }

    MoveDelta finish_delta() {
        MoveDelta d;
        for (const auto& [k, old] : undo_) {
            const int now = diag_nnz_[k];
            if (old > 0 && now == 0) d.leaves.push_back(k);
            else if (old == 0 && now > 0) d.arrivals.push_back(k);
        }
        std::sort(d.leaves.begin(), d.leaves.end());
        std::sort(d.arrivals.begin(), d.arrivals.end());
        d.gain = pre_num_diags_ - num_diags_;
        d.new_min_nnz = min_nnz_;
        d.new_min_nnz_count = min_nnz_count();
        return d;
    }

    // Sets diag_nnz_[k] to `target` while keeping the derived stats exact.
    void adjust(int k, int target) {
        const int old = diag_nnz_[k];
        if (old == target) return;
        diag_nnz_[k] = target;
        if (in_probe_ && touch_epoch_[k] != epoch_) {
            touch_epoch_[k] = epoch_;
            undo_.emplace_back(k, old);
        }
        if (old > 0) --cnt_of_[old];
        if (target > 0) ++cnt_of_[target];
        if (old == 0 && target > 0) ++num_diags_;
        if (old > 0 && target == 0) --num_diags_;
        if (num_diags_ == 0) {
            min_nnz_ = 0;
        } else if (target > 0 && (min_nnz_ == 0 || target < min_nnz_)) {
            min_nnz_ = target;
        } else if (old > 0 && old == min_nnz_ && cnt_of_[min_nnz_] == 0) {
            int m = min_nnz_;
            while (cnt_of_[m] == 0) ++m;
            min_nnz_ = m;
        }
    }

    void lift(Side s, int u, int pos, std::vector<int>* drops) {
        const int n = A_->n();
        if (s == Side::Row) {
            for (int j : A_->row(u)) {
                const int k = diag_index(pos, pc_.forward[j], n);
                adjust(k, diag_nnz_[k] - 1);
                if (drops && diag_nnz_[k] == 0) drops->push_back(k);
            }
        } else {
            for (int i : A_->col(u)) {
                const int k = diag_index(pr_.forward[i], pos, n);
                adjust(k, diag_nnz_[k] - 1);
                if (drops && diag_nnz_[k] == 0) drops->push_back(k);
            }
        }
    }

    void place(Side s, int u, int pos, std::vector<int>* rises) {
        const int n = A_->n();
        if (s == Side::Row) {
            for (int j : A_->row(u)) {
                const int k = diag_index(pos, pc_.forward[j], n);
                adjust(k, diag_nnz_[k] + 1);
                if (rises && diag_nnz_[k] == 1) rises->push_back(k);
            }
        } else {
            for (int i : A_->col(u)) {
                const int k = diag_index(pr_.forward[i], pos, n);
                adjust(k, diag_nnz_[k] + 1);
                if (rises && diag_nnz_[k] == 1) rises->push_back(k);
            }
        }
    }

    const PatternMatrix* A_;
    Permutation pr_, pc_;
    std::vector<int> diag_nnz_;
    std::vector<int> cnt_of_;  // cnt_of_[c] = diagonals with occupancy exactly c
    int num_diags_ = 0;
    int min_nnz_ = 0;

    bool in_probe_ = false;
    std::uint64_t epoch_ = 0;
    std::vector<std::uint64_t> touch_epoch_;
    std::vector<std::pair<int, int>> undo_;  // (diagonal, value before probe)
    Pending pending_;
    int pre_num_diags_ = 0;
    int pre_min_ = 0;
    int pre_min_cnt_ = 0;
};

inline DiagTracker init_stats(const PatternMatrix& A, const Permutation& pr, const Permutation& pc) {
    return DiagTracker(A, pr, pc);
}

/// Move acceptance: strict num_diags decrease, else equal num_diags with a
/// smaller min_nnz, else both equal with a larger min_nnz_count.
inline bool accept_rule(const MoveDelta& d, int cur_min_nnz, int cur_min_nnz_count) {
    if (d.gain > 0) return true;
    if (d.gain < 0) return false;
    if (d.new_min_nnz < cur_min_nnz) return true;
    return d.new_min_nnz == cur_min_nnz && d.new_min_nnz_count > cur_min_nnz_count;
}

/// Rows/columns having a nonzero on a diagonal with occupancy at most
/// min_nnz + slack; deduplicated, degree-0 entities excluded, shuffled.
inline std::pair<std::vector<int>, std::vector<int>> refresh_candidates(const DiagTracker& t, int slack,
                                                                        Rng& rng) {
    std::vector<int> rows, cols;
    const int thresh = t.min_nnz() + slack;
    if (t.min_nnz() > 0) {
        const int n = t.matrix().n();
        for (int u = 0; u < n; ++u)
            if (t.degree(Side::Row, u) > 0 && t.touches_scarce(Side::Row, u, thresh)) rows.push_back(u);
        for (int u = 0; u < n; ++u)
            if (t.degree(Side::Col, u) > 0 && t.touches_scarce(Side::Col, u, thresh)) cols.push_back(u);
    }
    rng_shuffle(rng, rows);
    rng_shuffle(rng, cols);
    return {std::move(rows), std::move(cols)};
}

struct PassRecord {
    int pass = 0;
    int num_diags = 0;
    int min_nnz = 0;
    int accepted_2opt = 0;
    int accepted_3opt = 0;
    double elapsed_ms = 0.0;
};

struct OptResult {
    Permutation pr, pc;
    DiagState state;
    std::vector<PassRecord> trace;
    int accepted_2opt = 0;
    int accepted_3opt = 0;
    bool reached_lower_bound = false;
    bool hit_time_budget = false;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline bool deadline_passed(Clock::time_point deadline) { return Clock::now() >= deadline; }

// Partner sequence over [0, n): a full shuffle when n fits in the probe cap,
// otherwise `cap` seeded draws.
inline std::vector<int> partner_sequence(Rng& rng, int n, int cap) {
    std::vector<int> seq;
    if (n <= cap) {
        seq.resize(n);
        for (int i = 0; i < n; ++i) seq[i] = i;
        rng_shuffle(rng, seq);
    } else {
        seq.reserve(cap);
        for (int i = 0; i < cap; ++i) seq.push_back(static_cast<int>(rng_below(rng, n)));
    }
    return seq;
}

inline bool anchor_gate(DiagTracker& t, Side s, int u) {
    if (t.leave_count(s, u).count > 0) return true;
    // No diagonal empties, but the secondary rule can still fire when the
    // anchor touches a diagonal at or just above the minimum occupancy.
    return t.touches_scarce(s, u, t.min_nnz() + 1);
}

inline int sweep_2opt(DiagTracker& t, Side s, const std::vector<int>& queue, Rng& rng,
                      const OptimizerConfig& cfg, int max_deg, Clock::time_point deadline,
                      bool* timed_out) {
    const int n = t.matrix().n();
    std::vector<char> marked(n, 0);
    int accepted = 0;
    for (int anchor : queue) {
        if (deadline_passed(deadline)) {
            *timed_out = true;
            break;
        }
        if (t.num_diags() == max_deg) break;
        if (marked[anchor]) continue;
        if (!anchor_gate(t, s, anchor)) continue;
        for (int partner : partner_sequence(rng, n, cfg.rng_partner_cap)) {
            if (partner == anchor || marked[partner]) continue;
            MoveDelta d = t.probe_swap(s, anchor, partner);
            if (accept_rule(d, t.probe_pre_min_nnz(), t.probe_pre_min_nnz_count())) {
                t.commit_probe();
                marked[anchor] = marked[partner] = 1;
                ++accepted;
                break;
            }
            t.rollback_probe();
        }
    }
    return accepted;
}

inline int sweep_3opt(DiagTracker& t, Side s, const std::vector<int>& queue, Rng& rng,
                      const OptimizerConfig& cfg, int max_deg, Clock::time_point deadline,
                      bool* timed_out) {
    const int n = t.matrix().n();
    std::vector<char> marked(n, 0);
    int accepted = 0;
    for (int c1 : queue) {
        if (deadline_passed(deadline)) {
            *timed_out = true;
            break;
        }
        if (t.num_diags() == max_deg) break;
        if (marked[c1]) continue;
        if (!anchor_gate(t, s, c1)) continue;
        int budget = cfg.rng_partner_cap;
        std::vector<int> mates = queue;
        rng_shuffle(rng, mates);
        bool moved = false;
        for (int c2 : mates) {
            if (moved || budget <= 0) break;
            if (c2 == c1 || marked[c2]) continue;
            for (int c3 : partner_sequence(rng, n, std::min(budget, 8))) {
                if (c3 == c1 || c3 == c2 || marked[c3]) continue;
                MoveDelta d = t.probe_rotate3(s, c1, c2, c3);
                --budget;
                if (accept_rule(d, t.probe_pre_min_nnz(), t.probe_pre_min_nnz_count())) {
                    t.commit_probe();
                    marked[c1] = marked[c2] = marked[c3] = 1;
                    ++accepted;
                    moved = true;
                    break;
                }
                t.rollback_probe();
                if (budget <= 0) break;
            }
        }
    }
    return accepted;
}

}  // namespace detail

/// Iterative improvement: up to max_passes passes of 2OPT row/column sweeps
/// followed by 3OPT sweeps over refreshed candidate queues. Stops early at
/// the degree lower bound, after a pass with no accepted move, or when the
/// time budget runs out.
inline OptResult optimize(const PatternMatrix& A, const Permutation& pr0, const Permutation& pc0,
                          const OptimizerConfig& cfg) {
    cfg.validate();
    DiagTracker t(A, pr0, pc0);
    const int max_deg = A.max_degree();
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto start = detail::Clock::now();
    const auto deadline = start + std::chrono::duration_cast<detail::Clock::duration>(
                                      std::chrono::duration<double>(cfg.time_budget_s));

    OptResult res;
    bool timed_out = false;
    res.reached_lower_bound = (t.num_diags() == max_deg);
    for (int pass = 1; !res.reached_lower_bound && pass <= cfg.max_passes; ++pass) {
        int a2 = 0, a3 = 0;
        {
            auto [qr, qc] = refresh_candidates(t, cfg.slack, rng);
            a2 += detail::sweep_2opt(t, Side::Row, qr, rng, cfg, max_deg, deadline, &timed_out);
            a2 += detail::sweep_2opt(t, Side::Col, qc, rng, cfg, max_deg, deadline, &timed_out);
        }
        if (cfg.enable_3opt && !timed_out && t.num_diags() > max_deg) {
            auto [qr, qc] = refresh_candidates(t, cfg.slack, rng);
            a3 += detail::sweep_3opt(t, Side::Row, qr, rng, cfg, max_deg, deadline, &timed_out);
            a3 += detail::sweep_3opt(t, Side::Col, qc, rng, cfg, max_deg, deadline, &timed_out);
        }
        res.accepted_2opt += a2;
        res.accepted_3opt += a3;
        const double ms = std::chrono::duration<double, std::milli>(detail::Clock::now() - start).count();
        res.trace.push_back({pass, t.num_diags(), t.min_nnz(), a2, a3, ms});
        if (t.num_diags() == max_deg) {
            res.reached_lower_bound = true;
            break;
        }
        if (a2 + a3 == 0) break;
        if (timed_out || detail::deadline_passed(deadline)) {
            res.hit_time_budget = true;
            break;
        }
    }
    res.pr = t.row_perm();
    res.pc = t.col_perm();
    res.state = t.state();
    if (res.state.num_diags < max_deg) throw std::logic_error("objective fell below the degree bound");
    return res;
}

}  // namespace diagpack
