// diagpack: row/column reordering for diagonal-packed encrypted SpMV.
//
// Subcommands: order, optimize, eliminate, exact, synth, verify, bench.
// All machine-readable output is JSON; one human summary line goes to stdout.
// Exit codes: 0 success, 2 I/O error, 3 validation error, 4 internal error.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "diagpack/elimination.hpp"
#include "diagpack/emulator.hpp"
#include "diagpack/exact.hpp"
#include "diagpack/harness.hpp"
#include "diagpack/io.hpp"
#include "diagpack/pipeline.hpp"
#include "diagpack/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace diagpack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 4;

double round4(double x) { return std::round(x * 10000.0) / 10000.0; }

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

json perm_json(const Permutation& p) { return json(p.forward); }

json ops_json(const OpCount& ops) {
    return json{{"mults", ops.mults},
                {"rots", ops.rots},
                {"rots_incl_zero", ops.rots_incl_zero},
                {"adds", ops.adds}};
}

json plan_json(const EliminationPlan& p) {
    return json{{"dense_rows", p.dense_rows},
                {"dense_cols", p.dense_cols},
                {"diags_before", p.diags_before},
                {"diags_after", p.diags_after},
                {"overhead_us", p.overhead_us},
                {"gain_us", p.gain_us},
                {"gain_us_no_split", p.gain_us_no_split},
                {"profitable", p.profitable}};
}

std::string trace_jsonl(const std::vector<PassRecord>& trace) {
    std::string out;
    for (const PassRecord& p : trace) {
        json rec{{"pass", p.pass},
                 {"num_diags", p.num_diags},
                 {"min_nnz", p.min_nnz},
                 {"accepted_2opt", p.accepted_2opt},
                 {"accepted_3opt", p.accepted_3opt},
                 {"elapsed_ms", p.elapsed_ms}};
        out += rec.dump();
        out += '\n';
    }
    return out;
}

struct CommonOpts {
    std::uint64_t seed = 0;
    double budget_s = 3600.0;
    int beta = 3;
    int gamma = 100;
    int nev = 200;
    int partner_cap = 64;
    std::string out_dir = ".";
    CostModel cost;

    void attach(CLI::App* app) {
        app->add_option("--seed", seed, "randomness seed");
        app->add_option("--budget", budget_s, "optimizer time budget in seconds");
        app->add_option("--beta", beta, "candidate-queue slack");
        app->add_option("--gamma", gamma, "maximum global passes");
        app->add_option("--nev", nev, "eigenvector count for the spectral ordering");
        app->add_option("--partner-cap", partner_cap, "probes per anchor");
        app->add_option("--out", out_dir, "output directory");
        app->add_option("--tcmult", cost.t_cmult, "ciphertext multiplication time (us)");
        app->add_option("--trot", cost.t_rot, "ciphertext rotation time (us)");
        app->add_option("--slots", cost.slots, "ciphertext slot count");
    }

    PipelineConfig pipeline() const {
        PipelineConfig p;
        p.nev = nev;
        p.opt.max_passes = gamma;
        p.opt.slack = beta;
        p.opt.time_budget_s = budget_s;
        p.opt.seed = seed;
        p.opt.rng_partner_cap = partner_cap;
        return p;
    }
};

OptLevel parse_opt_level(const std::string& s) {
    if (s == "none") return OptLevel::NoOpt;
    if (s == "2opt") return OptLevel::TwoOpt;
    if (s == "3opt") return OptLevel::ThreeOpt;
    throw std::invalid_argument("unknown optimization level '" + s + "'");
}

std::vector<std::pair<OrderingKind, SymMode>> selected_grid(const std::string& ordering,
                                                            const std::string& sym) {
    std::vector<OrderingKind> kinds;
    if (ordering == "all") {
        kinds = {OrderingKind::Natural, OrderingKind::Rcm, OrderingKind::Mp, OrderingKind::Lbs};
    } else if (ordering == "natural") kinds = {OrderingKind::Natural};
    else if (ordering == "rcm") kinds = {OrderingKind::Rcm};
    else if (ordering == "mp") kinds = {OrderingKind::Mp};
    else if (ordering == "lbs") kinds = {OrderingKind::Lbs};
    else if (ordering == "eigen") kinds = {OrderingKind::Eigen};
    else throw std::invalid_argument("unknown ordering '" + ordering + "'");

    std::vector<SymMode> syms;
    if (sym == "both") syms = {SymMode::PatternSum, SymMode::Bipartite};
    else if (sym == "pattern") syms = {SymMode::PatternSum};
    else if (sym == "bipartite") syms = {SymMode::Bipartite};
    else throw std::invalid_argument("unknown symmetrization '" + sym + "'");

    std::vector<std::pair<OrderingKind, SymMode>> grid;
    for (OrderingKind k : kinds) {
        if (k == OrderingKind::Natural) {
            grid.push_back({k, SymMode::PatternSum});
            continue;
        }
        for (SymMode m : syms) grid.push_back({k, m});
    }
    return grid;
}

// ---- order ---------------------------------------------------------------

int cmd_order(const std::string& input, const std::string& ordering, const std::string& sym,
              const CommonOpts& common) {
    if (ordering == "all" || sym == "both")
        throw std::invalid_argument("order expects a single ordering and symmetrization");
    PatternMatrix A = load_matrix_market(input);
    auto grid = selected_grid(ordering, sym);
    InitialPair init = initial_ordering(A, grid[0].first, grid[0].second, common.pipeline());

    fs::create_directories(common.out_dir);
    const std::string base = (fs::path(common.out_dir) / stem_of(input)).string();
    write_permutations(init.pr, init.pc, base + ".perm.txt");
    json summary{{"input", input},
                 {"n", A.n()},
                 {"nnz", A.nnz()},
                 {"ordering", ordering},
                 {"sym", sym},
                 {"num_diags", init.num_diags},
                 {"lower_bound", A.max_degree()},
                 {"perm_file", stem_of(input) + ".perm.txt"},
                 {"seed", common.seed}};
    write_text(base + ".order.json", summary.dump(2) + "\n");
    std::cout << ordering << "-" << sym << " on " << stem_of(input) << ": " << init.num_diags
              << " diagonals (lower bound " << A.max_degree() << ")\n";
    return kExitOk;
}

// ---- optimize --------------------------------------------------------------

int cmd_optimize(const std::string& input, const std::string& ordering, const std::string& sym,
                 const std::string& opt, bool eliminate, int patience, const CommonOpts& common) {
    const auto t0 = std::chrono::steady_clock::now();
    PatternMatrix A = load_matrix_market(input);
    const OptLevel level = parse_opt_level(opt);
    const PipelineConfig pcfg = common.pipeline();

    const int natural =
        count_diagonals(A, Permutation::identity(A.n()), Permutation::identity(A.n())).num_diags;

    VariantOutcome best;
    std::string chosen;
    bool have = false;
    for (const auto& [kind, symm] : selected_grid(ordering, sym)) {
        VariantOutcome r = run_variant(A, kind, symm, level, pcfg);
        if (!have || r.final_diags < best.final_diags) {
            best = std::move(r);
            chosen = std::string(to_string(kind)) +
                     (kind == OrderingKind::Natural ? "" : std::string("-") + to_string(symm));
            have = true;
        }
    }

    fs::create_directories(common.out_dir);
    const std::string base = (fs::path(common.out_dir) / stem_of(input)).string();
    write_permutations(best.pr, best.pc, base + ".perm.txt");
    write_text(base + ".trace.jsonl", trace_jsonl(best.trace));

    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    json summary{{"input", input},
                 {"n", A.n()},
                 {"nnz", A.nnz()},
                 {"ordering", chosen},
                 {"opt", opt},
                 {"seed", common.seed},
                 {"init_diags", natural},
                 {"order_diags", best.init_diags},
                 {"final_diags", best.final_diags},
                 {"lower_bound", A.max_degree()},
                 {"reduction_factor", round4(static_cast<double>(natural) / std::max(best.final_diags, 1))},
                 {"estimated_spmv_us", estimate_time_us(best.final_diags, A.n(), common.cost)},
                 {"accepted_2opt", best.accepted_2opt},
                 {"accepted_3opt", best.accepted_3opt},
                 {"perm_file", stem_of(input) + ".perm.txt"},
                 {"trace_file", stem_of(input) + ".trace.jsonl"},
                 {"elapsed_ms", elapsed_ms}};

    if (eliminate) {
        PlanSearchConfig scfg;
        scfg.patience = patience;
        scfg.per_candidate_budget_s = std::min(common.budget_s, 60.0);
        scfg.final_budget_s = common.budget_s;
        const OptLevel plan_level = level;
        OptimizeFn fn = [&](const PatternMatrix& core, double budget) {
            PipelineConfig inner = pcfg;
            inner.opt.time_budget_s = std::max(budget, 1e-3);
            VariantOutcome r = [&] {
                VariantOutcome acc;
                bool first = true;
                for (const auto& [kind, symm] : selected_grid(ordering, sym)) {
                    VariantOutcome v = run_variant(core, kind, symm, plan_level, inner);
                    if (first || v.final_diags < acc.final_diags) {
                        acc = std::move(v);
                        first = false;
                    }
                }
                return acc;
            }();
            return PipelineResult{r.final_diags, std::move(r.pr), std::move(r.pc)};
        };
        EliminationPlan plan = select_and_plan(A, common.cost, fn, scfg);
        write_text(base + ".plan.json", plan_json(plan).dump(2) + "\n");
        write_permutations(plan.core_pr, plan.core_pc, base + ".core.perm.txt");
        summary["elimination"] = plan_json(plan);
        summary["plan_file"] = stem_of(input) + ".plan.json";
        if (plan.profitable)
            summary["estimated_spmv_us_with_elimination"] =
                estimate_time_us(plan.diags_after, A.n(), common.cost, plan);
    }

    write_text(base + ".summary.json", summary.dump(2) + "\n");
    std::cout << stem_of(input) << ": " << natural << " -> " << best.final_diags << " diagonals ("
              << chosen << "+" << opt << ", bound " << A.max_degree() << ")\n";
    return kExitOk;
}

// ---- eliminate -------------------------------------------------------------

int cmd_eliminate(const std::string& input, const std::string& opt, int patience,
                  double candidate_budget, const CommonOpts& common) {
    PatternMatrix A = load_matrix_market(input);
    const OptLevel level = parse_opt_level(opt);
    const PipelineConfig pcfg = common.pipeline();
    PlanSearchConfig scfg;
    scfg.patience = patience;
    scfg.per_candidate_budget_s = candidate_budget;
    scfg.final_budget_s = common.budget_s;

    OptimizeFn fn = [&](const PatternMatrix& core, double budget) {
        PipelineConfig inner = pcfg;
        inner.opt.time_budget_s = std::max(budget, 1e-3);
        std::string chosen;
        VariantOutcome r = run_best_of_all(core, level, inner, false, &chosen);
        return PipelineResult{r.final_diags, std::move(r.pr), std::move(r.pc)};
    };
    EliminationPlan plan = select_and_plan(A, common.cost, fn, scfg);

    fs::create_directories(common.out_dir);
    const std::string base = (fs::path(common.out_dir) / stem_of(input)).string();
    write_text(base + ".plan.json", plan_json(plan).dump(2) + "\n");
    write_permutations(plan.core_pr, plan.core_pc, base + ".core.perm.txt");
    write_matrix_market(plan.core, base + ".core.mtx", plan.core.has_values());
    std::cout << stem_of(input) << ": eliminated " << plan.dense_rows.size() << " rows + "
              << plan.dense_cols.size() << " cols, diagonals " << plan.diags_before << " -> "
              << plan.diags_after << (plan.profitable ? " (profitable)" : " (not profitable)") << "\n";
    return kExitOk;
}

// ---- exact -----------------------------------------------------------------

int cmd_exact(const std::string& input, int limit, bool brute_force, const std::string& ilp_path,
              const CommonOpts& common) {
    PatternMatrix A = load_matrix_market(input);
    fs::create_directories(common.out_dir);
    const std::string base = (fs::path(common.out_dir) / stem_of(input)).string();
    if (!ilp_path.empty()) export_ilp(A, ilp_path);
    ExactResult r = exact_cbs2d(A, limit, !brute_force);
    json out{{"optimum", r.optimum},
             {"pr", perm_json(r.pr)},
             {"pc", perm_json(r.pc)},
             {"nodes_explored", r.nodes_explored},
             {"method", r.method}};
    write_text(base + ".exact.json", out.dump(2) + "\n");
    std::cout << stem_of(input) << ": optimum " << r.optimum << " (" << r.method << ", "
              << r.nodes_explored << " nodes)\n";
    return kExitOk;
}

// ---- synth -----------------------------------------------------------------

int cmd_synth(int n, int ell, double noise, bool valued, const CommonOpts& common) {
    SynthSpec spec;
    spec.n = n;
    spec.ell = ell;
    spec.noise_p = noise;
    spec.seed = common.seed;
    SynthResult r = generate(spec);

    fs::create_directories(common.out_dir);
    std::ostringstream name;
    name << "synth_n" << n << "_l" << ell << "_p" << noise << "_s" << common.seed;
    const std::string base = (fs::path(common.out_dir) / name.str()).string();
    write_matrix_market(r.scrambled, base + ".mtx", valued);
    write_permutations(r.hidden, r.hidden, base + ".hidden.perm.txt");
    json sidecar{{"spec",
                  {{"n", n}, {"ell", ell}, {"noise_p", noise}, {"seed", common.seed}, {"symmetric", true}}},
                 {"true_diags", r.true_diags},
                 {"residues", r.residues},
                 {"nnz", r.scrambled.nnz()},
                 {"matrix_file", name.str() + ".mtx"},
                 {"hidden_permutation_file", name.str() + ".hidden.perm.txt"}};
    write_text(base + ".json", sidecar.dump(2) + "\n");
    std::cout << name.str() << ": " << r.scrambled.nnz() << " nonzeros, " << r.true_diags
              << " true diagonals\n";
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& input, const std::string& perm_file, const CommonOpts& common) {
    PatternMatrix A = load_matrix_market(input, LoadMode::Valued);
    Permutation pr = Permutation::identity(A.n());
    Permutation pc = Permutation::identity(A.n());
    if (!perm_file.empty()) std::tie(pr, pc) = read_permutations(perm_file);
    if (pr.size() != A.n()) throw std::invalid_argument("permutation size does not match the matrix");

    Rng rng(common.seed ^ 0x517cc1b727220a95ULL);
    std::vector<double> x(A.n());
    for (double& v : x) v = rng_signed_unit(rng);

    OpCount ops;
    const std::vector<double> y = permuted_pipeline(A, pr, pc, x, &ops);
    const std::vector<double> want = dense_matvec(A, x);
    double max_abs_err = 0.0;
    for (int i = 0; i < A.n(); ++i) max_abs_err = std::max(max_abs_err, std::fabs(y[i] - want[i]));

    json out{{"input", input},
             {"max_abs_err", max_abs_err},
             {"ops", ops_json(ops)},
             {"estimated_us", estimate_time_us(ops.mults, A.n(), common.cost)}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

json variant_result_json(const VariantResult& r) {
    return json{{"matrix_id", r.matrix_id},
                {"sym", r.sym},
                {"ordering", r.ordering},
                {"opt", r.opt},
                {"num_diags_init", r.num_diags_init},
                {"num_diags_final", r.num_diags_final},
                {"elapsed_s", r.elapsed_s},
                {"estimated_spmv_us", r.estimated_spmv_us},
                {"failed", r.failed},
                {"error", r.error}};
}

VariantResult variant_result_from_json(const json& j) {
    VariantResult r;
    r.matrix_id = j.at("matrix_id").get<std::string>();
    r.sym = j.at("sym").get<std::string>();
    r.ordering = j.at("ordering").get<std::string>();
    r.opt = j.at("opt").get<std::string>();
    r.num_diags_init = j.at("num_diags_init").get<int>();
    r.num_diags_final = j.at("num_diags_final").get<int>();
    r.elapsed_s = j.value("elapsed_s", 0.0);
    r.estimated_spmv_us = j.value("estimated_spmv_us", 0.0);
    r.failed = j.value("failed", false);
    r.error = j.value("error", std::string());
    return r;
}

int bench_threads() {
    if (const char* env = std::getenv("DIAGPACK_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

int cmd_bench(std::vector<std::string> inputs, const std::string& dir, const std::string& manifest,
              bool include_eigen, bool force, bool apply_filter, const std::string& taus_csv,
              const CommonOpts& common) {
    if (!dir.empty()) {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".mtx") inputs.push_back(e.path().string());
        std::sort(inputs.begin(), inputs.end());
    }
    if (!manifest.empty()) {
        std::ifstream in(manifest);
        if (!in) throw IoError("cannot open " + manifest);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            inputs.push_back(line);
        }
    }
    if (inputs.empty()) throw std::invalid_argument("bench needs matrices (positional, --dir or --manifest)");

    fs::create_directories(common.out_dir);
    const std::string results_path = (fs::path(common.out_dir) / "results.jsonl").string();

    std::vector<VariantResult> all;
    std::set<std::pair<std::string, std::string>> done;
    if (!force && fs::exists(results_path)) {
        std::ifstream in(results_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            VariantResult r = variant_result_from_json(json::parse(line));
            done.insert({r.matrix_id, r.variant_key()});
            all.push_back(std::move(r));
        }
    }

    HarnessConfig hcfg;
    hcfg.pipeline = common.pipeline();
    hcfg.cost = common.cost;
    hcfg.include_eigen = include_eigen;

    struct Job {
        std::string path;
        std::string id;
    };
    std::vector<Job> jobs;
    for (const std::string& p : inputs) {
        const std::string id = stem_of(p);
        if (!force && done.count({id, "-.natural+noopt"})) continue;  // matrix already completed
        jobs.push_back({p, id});
    }

    std::mutex sink_mutex;
    std::ofstream sink(results_path, force ? std::ios::trunc : std::ios::app);
    if (!sink) throw IoError("cannot write " + results_path);
    if (force) all.clear();

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            std::vector<VariantResult> rs;
            try {
                PatternMatrix A = load_matrix_market(job.path);
                if (apply_filter) {
                    FilterDecision d = dataset_filter(A);
                    if (!d.include) {
                        std::lock_guard<std::mutex> lock(sink_mutex);
                        std::cout << job.id << ": skipped (" << d.rule << ")\n";
                        continue;
                    }
                }
                rs = run_matrix(A, job.id, hcfg);
            } catch (const std::exception& e) {
                VariantResult r;
                r.matrix_id = job.id;
                r.sym = "-";
                r.ordering = "load";
                r.opt = "noopt";
                r.failed = true;
                r.error = e.what();
                rs.push_back(std::move(r));
            }
            std::lock_guard<std::mutex> lock(sink_mutex);
            for (const VariantResult& r : rs) sink << variant_result_json(r).dump() << "\n";
            sink.flush();
            all.insert(all.end(), rs.begin(), rs.end());
            std::cout << job.id << ": done (" << rs.size() << " variants)\n";
        }
    };
    const int nthreads = std::min<int>(bench_threads(), std::max<std::size_t>(jobs.size(), 1));
    std::vector<std::thread> threads;
    for (int t = 1; t < nthreads; ++t) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();

    std::vector<double> taus{1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0};
    if (!taus_csv.empty()) {
        taus.clear();
        std::istringstream ss(taus_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) taus.push_back(std::stod(tok));
    }
    auto board = leaderboard(all);
    write_text((fs::path(common.out_dir) / "leaderboard.csv").string(), leaderboard_csv(board));
    std::vector<std::string> variant_names;
    for (const auto& row : board) variant_names.push_back(row.variant);
    write_text((fs::path(common.out_dir) / "profile.csv").string(),
               profile_csv(performance_profile(all, variant_names, taus)));
    std::cout << "bench: " << all.size() << " results, leaderboard.csv and profile.csv written to "
              << common.out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D diagonal packing: reorder sparse matrices for diagonal-sum encrypted SpMV"};
    app.require_subcommand(1);

    CommonOpts common;

    // order
    auto* order = app.add_subcommand("order", "compute an initial ordering pair");
    std::string order_input, order_kind = "rcm", order_sym = "pattern";
    order->add_option("input", order_input, "Matrix Market file")->required();
    order->add_option("--ordering", order_kind, "natural|rcm|mp|lbs|eigen");
    order->add_option("--sym", order_sym, "pattern|bipartite");
    common.attach(order);

    // optimize
    auto* opt = app.add_subcommand("optimize", "initial ordering plus iterative improvement");
    std::string opt_input, opt_kind = "all", opt_sym = "both", opt_level = "3opt";
    bool opt_eliminate = false;
    int opt_patience = 10;
    opt->add_option("input", opt_input, "Matrix Market file")->required();
    opt->add_option("--ordering", opt_kind, "natural|rcm|mp|lbs|eigen|all");
    opt->add_option("--sym", opt_sym, "pattern|bipartite|both");
    opt->add_option("--opt", opt_level, "none|2opt|3opt");
    opt->add_flag("--eliminate", opt_eliminate, "run the dense row/column elimination search");
    opt->add_option("--patience", opt_patience, "elimination search patience");
    common.attach(opt);

    // eliminate
    auto* elim = app.add_subcommand("eliminate", "dense row/column elimination planning");
    std::string elim_input, elim_level = "3opt";
    int elim_patience = 10;
    double elim_budget = 60.0;
    elim->add_option("input", elim_input, "Matrix Market file")->required();
    elim->add_option("--opt", elim_level, "none|2opt|3opt");
    elim->add_option("--patience", elim_patience, "consecutive non-improving prefixes tolerated");
    elim->add_option("--candidate-budget", elim_budget, "optimizer budget per candidate (s)");
    common.attach(elim);

    // exact
    auto* exact = app.add_subcommand("exact", "exhaustive optimum for small matrices");
    std::string exact_input, exact_ilp;
    int exact_limit = 8;
    bool exact_bf = false;
    exact->add_option("input", exact_input, "Matrix Market file")->required();
    exact->add_option("--limit", exact_limit, "maximum matrix order");
    exact->add_flag("--brute-force", exact_bf, "disable branch-and-bound pruning");
    exact->add_option("--export-ilp", exact_ilp, "also write the binary program in LP format");
    common.attach(exact);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a scrambled noisy circulant");
    int synth_n = 1000, synth_ell = 10;
    double synth_noise = 0.0;
    bool synth_valued = false;
    synth->add_option("--n", synth_n, "matrix order");
    synth->add_option("--ell", synth_ell, "circulant diagonals");
    synth->add_option("--noise", synth_noise, "per-entry-pair removal probability");
    synth->add_flag("--valued", synth_valued, "write unit values instead of a pattern file");
    common.attach(synth);

    // verify
    auto* verify = app.add_subcommand("verify", "emulate the diagonal-sum product against a dense oracle");
    std::string verify_input, verify_perms;
    verify->add_option("input", verify_input, "Matrix Market file (values required)")->required();
    verify->add_option("--perms", verify_perms, "permutation pair file to route through");
    common.attach(verify);

    // bench
    auto* bench = app.add_subcommand("bench", "batch evaluation with leaderboard and profiles");
    std::vector<std::string> bench_inputs;
    std::string bench_dir, bench_manifest, bench_taus;
    bool bench_eigen = false, bench_force = false, bench_filter = false;
    bench->add_option("inputs", bench_inputs, "Matrix Market files");
    bench->add_option("--dir", bench_dir, "directory of .mtx files");
    bench->add_option("--manifest", bench_manifest, "file listing matrix paths");
    bench->add_flag("--include-eigen", bench_eigen, "add the spectral ordering to the grid");
    bench->add_flag("--force", bench_force, "ignore existing results and recompute");
    bench->add_flag("--filter", bench_filter, "apply the improvement-opportunity filter");
    bench->add_option("--taus", bench_taus, "comma-separated profile tolerances");
    common.attach(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        common.cost.validate();
        if (order->parsed()) return cmd_order(order_input, order_kind, order_sym, common);
        if (opt->parsed())
            return cmd_optimize(opt_input, opt_kind, opt_sym, opt_level, opt_eliminate, opt_patience,
                                common);
        if (elim->parsed()) return cmd_eliminate(elim_input, elim_level, elim_patience, elim_budget, common);
        if (exact->parsed()) return cmd_exact(exact_input, exact_limit, exact_bf, exact_ilp, common);
        if (synth->parsed()) return cmd_synth(synth_n, synth_ell, synth_noise, synth_valued, common);
        if (verify->parsed()) return cmd_verify(verify_input, verify_perms, common);
        if (bench->parsed())
            return cmd_bench(bench_inputs, bench_dir, bench_manifest, bench_eigen, bench_force,
                             bench_filter, bench_taus, common);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitValidation;
}
