#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diagpack/rng.hpp"

namespace diagpack {

class EigenSolverError : public std::runtime_error {
public:
    explicit EigenSolverError(const std::string& what) : std::runtime_error(what) {}
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

struct LanczosOptions {
    double tol = 1e-6;  // Ritz residual tolerance
    int iter_cap = 0;   // per-run step cap; 0 means 10*nev + 200
    int max_runs = 50;
    std::uint64_t seed = 0;
};

namespace detail {

inline double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void vaxpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

/// Implicit-QL eigensolver for a symmetric tridiagonal matrix. d holds the
/// diagonal, e the subdiagonal (e[i] couples i and i+1). On return d carries
/// the eigenvalues; when z is non-null it must come in as the m x m identity
/// (row-major) and leaves with eigenvector j in column j.
inline void tridiag_ql(std::vector<double>& d, std::vector<double> e, std::vector<double>* z) {
    const int m = static_cast<int>(d.size());
    if (m == 0) return;
    e.resize(static_cast<std::size_t>(m), 0.0);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int blk;
        do {
            for (blk = l; blk < m - 1; ++blk) {
                const double dd = std::fabs(d[blk]) + std::fabs(d[blk + 1]);
                if (std::fabs(e[blk]) <= eps * dd) break;
            }
            if (blk != l) {
                if (iter++ == 64) throw EigenSolverError("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[blk] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = blk - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[blk] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int row = 0; row < m; ++row) {
                            f = (*z)[static_cast<std::size_t>(row) * m + i + 1];
                            (*z)[static_cast<std::size_t>(row) * m + i + 1] =
                                s * (*z)[static_cast<std::size_t>(row) * m + i] + c * f;
                            (*z)[static_cast<std::size_t>(row) * m + i] =
                                c * (*z)[static_cast<std::size_t>(row) * m + i] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[blk] = 0.0;
            }
        } while (blk != l);
    }
}

struct RitzInfo {
    std::vector<double> values;      // descending
    std::vector<int> order;          // values[i] = d[order[i]]
    std::vector<double> residuals;   // |beta_m * s_{m,i}|, aligned with values (with vectors only)
    std::vector<double> z;           // raw row-major eigenvector matrix (with vectors only)
    int m = 0;
};

inline RitzInfo ritz_values(const std::vector<double>& alphas, const std::vector<double>& betas,
                            bool with_vectors, double last_beta) {
    RitzInfo info;
    info.m = static_cast<int>(alphas.size());
    std::vector<double> d = alphas;
    std::vector<double> e(betas.begin(), betas.end());
    if (!e.empty()) e.pop_back();  // the final beta is the residual scale, not a coupling
    if (with_vectors) {
        info.z.assign(static_cast<std::size_t>(info.m) * info.m, 0.0);
        for (int i = 0; i < info.m; ++i) info.z[static_cast<std::size_t>(i) * info.m + i] = 1.0;
        tridiag_ql(d, std::move(e), &info.z);
    } else {
        tridiag_ql(d, std::move(e), nullptr);
    }
    info.order.resize(info.m);
    for (int i = 0; i < info.m; ++i) info.order[i] = i;
    std::sort(info.order.begin(), info.order.end(), [&](int a, int b) { return d[a] > d[b]; });
    info.values.resize(info.m);
    for (int i = 0; i < info.m; ++i) info.values[i] = d[info.order[i]];
    if (with_vectors) {
        info.residuals.resize(info.m);
        for (int i = 0; i < info.m; ++i) {
            const double s_last =
                info.z[static_cast<std::size_t>(info.m - 1) * info.m + info.order[i]];
            info.residuals[i] = std::fabs(last_beta * s_last);
        }
    }
    return info;
}

// How many of this run's Ritz values would enter the merged top-nev pool.
inline int displacement_count(const std::vector<double>& ritz_desc, const std::vector<double>& pool_desc,
                              int nev) {
    int needed = 0;
    std::size_t pi = 0, ri = 0;
    for (int slot = 0; slot < nev; ++slot) {
        const double pv = pi < pool_desc.size() ? pool_desc[pi] : -std::numeric_limits<double>::infinity();
        const double rv = ri < ritz_desc.size() ? ritz_desc[ri] : -std::numeric_limits<double>::infinity();
        if (rv > pv) {
            ++needed;
            ++ri;
        } else if (pi < pool_desc.size()) {
            ++pi;
        } else {
            break;
        }
    }
    return needed;
}

}  // namespace detail

/// Largest-algebraic eigenpairs of a symmetric operator via Lanczos with full
/// reorthogonalization. Converged Ritz pairs are locked and deflated between
/// restarted runs, which is what recovers multiple eigenvalues: a single
/// Krylov sequence carries one vector per distinct eigenvalue, and each
/// deflated restart surfaces the next copy.
///
/// `op(in, out)` must apply the operator to `in` (both length dim).
template <typename MatVec>
std::vector<EigenPair> lanczos_largest(const MatVec& op, int dim, int nev,
                                       const LanczosOptions& opt = {}) {
    if (dim < 1) throw std::invalid_argument("operator dimension must be >= 1");
    if (nev < 1 || nev > dim) throw std::invalid_argument("nev must be in [1, dim]");
    const int per_run_cap = opt.iter_cap > 0 ? opt.iter_cap : 10 * nev + 200;
    Rng rng(opt.seed ^ 0xc3a5c85c97cb3127ULL);

    std::vector<EigenPair> pool;  // kept sorted by value descending
    std::vector<double> pool_values;

    auto random_unit_orthogonal = [&](const std::vector<std::vector<double>>& basis) {
        std::vector<double> v(dim);
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (double& x : v) x = rng_signed_unit(rng);
            for (int pass = 0; pass < 2; ++pass) {
                for (const EigenPair& p : pool) detail::vaxpy(v, -detail::vdot(v, p.vector), p.vector);
                for (const auto& b : basis) detail::vaxpy(v, -detail::vdot(v, b), b);
            }
            const double nrm = detail::vnorm(v);
            if (nrm > 1e-8) {
                for (double& x : v) x /= nrm;
                return v;
            }
        }
        throw EigenSolverError("could not draw a vector outside the converged subspace");
    };

    const double done_tol = 1e-8;
    for (int run = 0; run < opt.max_runs; ++run) {
        const int deflated_dim = dim - static_cast<int>(pool.size());
        if (deflated_dim <= 0) break;
        const int m_max = std::min(deflated_dim, per_run_cap);

        std::vector<std::vector<double>> basis;
        std::vector<double> alphas, betas;
        std::vector<double> work(dim);
        basis.push_back(random_unit_orthogonal(basis));
        double scale = 1.0;

        detail::RitzInfo ritz;
        std::vector<double> prev_top;
        bool run_done = false;
        int steps = 0;
        int next_full_check = 0;
        while (steps < m_max && !run_done) {
            const std::vector<double>& v = basis.back();
            op(v.data(), work.data());
            if (betas.size() >= 1 && basis.size() >= 2)
                detail::vaxpy(work, -betas.back(), basis[basis.size() - 2]);
            const double alpha = detail::vdot(work, v);
            detail::vaxpy(work, -alpha, v);
            for (int pass = 0; pass < 2; ++pass) {
                for (const EigenPair& p : pool)
                    detail::vaxpy(work, -detail::vdot(work, p.vector), p.vector);
                for (const auto& b : basis) detail::vaxpy(work, -detail::vdot(work, b), b);
            }
            double beta = detail::vnorm(work);
            alphas.push_back(alpha);
            scale = std::max({scale, std::fabs(alpha), beta});
            ++steps;

            const bool exhausted = static_cast<int>(basis.size()) >= deflated_dim || steps >= m_max;
            const bool breakdown = beta <= 1e-12 * scale;
            if (breakdown) beta = 0.0;
            betas.push_back(beta);

            const bool checkpoint = exhausted || breakdown || (steps % 32 == 0);
            if (checkpoint) {
                detail::RitzInfo values_only = detail::ritz_values(alphas, betas, false, betas.back());
                const int needed = detail::displacement_count(values_only.values, pool_values, nev);
                bool stable = exhausted || needed == 0;
                if (!stable && static_cast<int>(prev_top.size()) >= needed) {
                    stable = true;
                    for (int i = 0; i < needed; ++i) {
                        if (std::fabs(values_only.values[i] - prev_top[i]) >
                            1e-9 * std::max(1.0, std::fabs(values_only.values[i]))) {
                            stable = false;
                            break;
                        }
                    }
                }
                prev_top = values_only.values;
                if (stable && (steps >= next_full_check || exhausted)) {
                    ritz = detail::ritz_values(alphas, betas, true, betas.back());
                    int converged_prefix = 0;
                    while (converged_prefix < ritz.m &&
                           ritz.residuals[converged_prefix] <=
                               opt.tol * std::max(1.0, std::fabs(ritz.values[converged_prefix])))
                        ++converged_prefix;
                    if (needed == 0 || converged_prefix >= needed || exhausted) run_done = true;
                    else next_full_check = steps + 64;  // residuals lag the value estimates
                }
            }
            if (!run_done) {
                if (breakdown) {
                    if (static_cast<int>(basis.size()) >= deflated_dim) break;
                    basis.push_back(random_unit_orthogonal(basis));
                } else {
                    for (double& x : work) x /= beta;
                    basis.push_back(work);
                }
            }
        }

        if (ritz.m == 0) ritz = detail::ritz_values(alphas, betas, true, betas.back());

        // Lock the converged prefix that actually improves the pool. The first
        // value left behind bounds what the next deflated run could deliver.
        const int needed_final = detail::displacement_count(ritz.values, pool_values, nev);
        int locked = 0;
        double first_unlocked = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < ritz.m; ++i) {
            const bool converged =
                ritz.residuals[i] <= opt.tol * std::max(1.0, std::fabs(ritz.values[i]));
            if (!converged || locked >= needed_final + 4) {
                first_unlocked = ritz.values[i];
                break;
            }
            EigenPair p;
            p.value = ritz.values[i];
            p.vector.assign(dim, 0.0);
            const int col = ritz.order[i];
            for (int j = 0; j < ritz.m; ++j) {
                const double w = ritz.z[static_cast<std::size_t>(j) * ritz.m + col];
                if (w != 0.0) detail::vaxpy(p.vector, w, basis[j]);
            }
            for (const EigenPair& q : pool) detail::vaxpy(p.vector, -detail::vdot(p.vector, q.vector), q.vector);
            const double nrm = detail::vnorm(p.vector);
            if (nrm <= 1e-8) continue;  // collapsed onto the pool span; value already represented
            for (double& x : p.vector) x /= nrm;
            pool.push_back(std::move(p));
            ++locked;
        }
        std::sort(pool.begin(), pool.end(),
                  [](const EigenPair& a, const EigenPair& b) { return a.value > b.value; });
        pool_values.resize(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) pool_values[i] = pool[i].value;

        if (static_cast<int>(pool.size()) >= nev) {
            const double threshold = pool_values[static_cast<std::size_t>(nev) - 1];
            if (first_unlocked <= threshold + done_tol * std::max(1.0, std::fabs(threshold))) {
                pool.resize(static_cast<std::size_t>(nev));
                return pool;
            }
        }
        if (locked == 0 && static_cast<int>(pool.size()) < nev)
            throw EigenSolverError("no Ritz pair converged within the iteration cap");
    }
    if (static_cast<int>(pool.size()) >= nev) {
        pool.resize(static_cast<std::size_t>(nev));
        return pool;
    }
    throw EigenSolverError("eigensolver did not converge to the requested pair count");
}

}  // namespace diagpack
