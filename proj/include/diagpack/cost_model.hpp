#pragma once

#include <cmath>
#include <stdexcept>

namespace diagpack {

/// CKKS operation timings (microseconds) and the ciphertext slot count.
/// Defaults are measured averages at ring dimension 8192. Only t_cmult and
/// t_rot drive decisions; t_add and t_pmult are carried for reporting.
struct CostModel {
    double t_cmult = 3814.3;
    double t_rot = 11073.3;
    int slots = 4096;
    double t_add = 119.4;
    double t_pmult = 203.1;

    void validate() const {
        if (t_cmult <= 0 || t_rot <= 0 || t_add <= 0 || t_pmult <= 0)
            throw std::invalid_argument("operation times must be positive");
        if (slots <= 0 || (slots & (slots - 1)) != 0)
            throw std::invalid_argument("slot count must be a power of two");
    }
};

inline int ceil_log2(int n) {
    if (n < 1) throw std::invalid_argument("ceil_log2 requires n >= 1");
    int bits = 0;
    while ((1LL << bits) < n) ++bits;
    return bits;
}

inline int ciphertexts_per_diagonal(int n, const CostModel& cm) {
    return static_cast<int>((static_cast<long long>(n) + cm.slots - 1) / cm.slots);
}

/// Modeled cost of handling dense rows/columns separately: each dense row is
/// an inner product (one multiplication plus a log-depth rotation reduction),
/// each dense column a single scaled addition path (one multiplication).
inline double elimination_overhead_us(int dr_size, int dc_size, int n, const CostModel& cm) {
    if (n < 1) throw std::invalid_argument("matrix order must be >= 1");
    return dr_size * (cm.t_cmult + ceil_log2(n) * cm.t_rot) + dc_size * cm.t_cmult;
}

/// Modeled saving of emptying delta_elim diagonals: one multiplication and
/// one rotation per diagonal, times the per-diagonal ciphertext split.
inline double elimination_gain_us(int delta_elim, const CostModel& cm, int n) {
    if (delta_elim < 0) throw std::invalid_argument("delta_elim must be >= 0");
    return static_cast<double>(delta_elim) * ciphertexts_per_diagonal(n, cm) * (cm.t_cmult + cm.t_rot);
}

inline double elimination_gain_us_no_split(int delta_elim, const CostModel& cm) {
    return static_cast<double>(delta_elim) * (cm.t_cmult + cm.t_rot);
}

/// Estimated multiplication time for a diagonal count, the figure reported
/// beside every optimization result.
inline double estimate_time_us(int num_diags, int n, const CostModel& cm) {
    return static_cast<double>(num_diags) * ciphertexts_per_diagonal(n, cm) * (cm.t_cmult + cm.t_rot);
}

}  // namespace diagpack
