#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "diagpack/exact.hpp"
#include "diagpack/optimizer.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace diagpack;
using namespace diagpack::testing;

TEST_CASE("exact_cbs2d on packed and trivial instances") {
    SUBCASE("circulants are already optimal") {
        for (auto residues : {std::vector<int>{0}, std::vector<int>{0, 2}, std::vector<int>{1, 3, 4}}) {
            PatternMatrix C = circulant(6, residues);
            ExactResult r = exact_cbs2d(C);
            CHECK(r.optimum == static_cast<int>(residues.size()));
            CHECK(count_diagonals(C, r.pr, r.pc).num_diags == r.optimum);
        }
    }
    SUBCASE("1x1") {
        PatternMatrix A = PatternMatrix::from_coords(1, {{0, 0, 1.0}});
        CHECK(exact_cbs2d(A).optimum == 1);
    }
    SUBCASE("empty matrix") {
        PatternMatrix A = PatternMatrix::from_coords(3, {});
        CHECK(exact_cbs2d(A).optimum == 0);
    }
    SUBCASE("size limit is enforced") {
        PatternMatrix A = PatternMatrix::from_coords(9, {{0, 0, 1.0}});
        CHECK_THROWS_AS(exact_cbs2d(A, 8), std::invalid_argument);
    }
}

TEST_CASE("branch-and-bound equals the unpruned enumeration oracle") {
    Rng rng(71);
    int done = 0;
    while (done < 50) {
        PatternMatrix A = random_pattern(rng, 4, 0.4);
        if (A.nnz() != 6) continue;  // sample 4x4 patterns with 6 nonzeros
        ++done;
        ExactResult bb = exact_cbs2d(A, 8, true);
        ExactResult bf = exact_cbs2d(A, 8, false);
        CHECK(bb.optimum == bf.optimum);
        CHECK(bb.optimum >= A.max_degree());
        CHECK(count_diagonals(A, bb.pr, bb.pc).num_diags == bb.optimum);
        CHECK(bb.nodes_explored <= bf.nodes_explored);
    }
}

TEST_CASE("row rotations leave the objective unchanged") {
    Rng rng(73);
    for (int t = 0; t < 20; ++t) {
        const int n = 6;
        PatternMatrix A = random_pattern(rng, n, 0.35);
        Permutation pr = Permutation::random(n, rng);
        Permutation pc = Permutation::random(n, rng);
        const int base = count_diagonals(A, pr, pc).num_diags;
        for (int shift = 1; shift < n; ++shift) {
            std::vector<int> f = pr.forward;
            for (int& v : f) v = (v + shift) % n;
            CHECK(count_diagonals(A, Permutation::from_forward(f), pc).num_diags == base);
        }
    }
}

TEST_CASE("optimizer never beats the exact optimum") {
    Rng rng(79);
    OptimizerConfig cfg;
    cfg.max_passes = 30;
    for (int t = 0; t < 25; ++t) {
        const int n = 5;
        PatternMatrix A = random_pattern(rng, n, 0.3);
        if (A.nnz() == 0) continue;
        ExactResult ex = exact_cbs2d(A);
        cfg.seed = 500 + t;
        OptResult opt = optimize(A, Permutation::identity(n), Permutation::identity(n), cfg);
        CHECK(opt.state.num_diags >= ex.optimum);
        CHECK(ex.optimum >= A.max_degree());
    }
}

TEST_CASE("ilp export") {
    namespace fs = std::filesystem;
    SUBCASE("variable and constraint counts for a 2x2 single-entry model") {
        PatternMatrix A = PatternMatrix::from_coords(2, {{0, 1, 1.0}});
        const std::string path = (fs::temp_directory_path() / "diagpack_tiny.lp").string();
        export_ilp(A, path);
        std::ifstream in(path);
        std::string line;
        int activation = 0, binaries = 0, fixes = 0;
        while (std::getline(in, line)) {
            if (line.find(" act_") == 0) ++activation;
            if (line.find(" fix_origin") == 0) ++fixes;
        }
        in.clear();
        in.seekg(0);
        bool in_binary = false;
        while (std::getline(in, line)) {
            if (line == "Binary") { in_binary = true; continue; }
            if (line == "End") in_binary = false;
            if (in_binary) ++binaries;
        }
        CHECK(activation == 1 * 2 * 2);
        CHECK(binaries == 2 * 2 + 2 * 2 + 2);
        CHECK(fixes == 1);
    }
    SUBCASE("toy pattern model sizes") {
        PatternMatrix A = toy7x7();
        const std::string path = (fs::temp_directory_path() / "diagpack_toy7.lp").string();
        export_ilp(A, path);
        std::ifstream in(path);
        std::string line;
        int activation = 0, binaries = 0;
        bool in_binary = false;
        while (std::getline(in, line)) {
            if (line.rfind(" act_", 0) == 0) ++activation;
            if (line == "Binary") { in_binary = true; continue; }
            if (line == "End") in_binary = false;
            else if (in_binary) ++binaries;
        }
        CHECK(activation == 11 * 49);
        CHECK(binaries == 2 * 49 + 7);
    }
}

namespace {

// Minimal reader for the exported model: evaluates every constraint line
// under a 0/1 assignment. Terms look like "z_3", "p_1_0", "q_2_2" with
// coefficients +1/-1 from the surrounding "+"/"-" tokens.
struct LpModel {
    struct Term {
        double coef;
        std::string var;
    };
    struct Constraint {
        std::vector<Term> terms;
        char op;  // '=' or '>'
        double rhs;
    };
    std::vector<std::string> objective_vars;
    std::vector<Constraint> constraints;
};

LpModel parse_lp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    LpModel model;
    std::string line, section;
    std::string pending;  // constraints may wrap across lines
    auto flush = [&](const std::string& text) {
        if (text.empty()) return;
        const auto colon = text.find(':');
        REQUIRE(colon != std::string::npos);
        std::istringstream ss(text.substr(colon + 1));
        LpModel::Constraint con{};
        std::string tok;
        double sign = 1.0;
        bool at_rhs = false;
        while (ss >> tok) {
            if (tok == "+") sign = 1.0;
            else if (tok == "-") sign = -1.0;
            else if (tok == "=" || tok == ">=") {
                con.op = tok[0] == '=' ? '=' : '>';
                at_rhs = true;
                sign = 1.0;
            } else if (at_rhs) {
                con.rhs = sign * std::stod(tok);
            } else {
                con.terms.push_back({sign, tok});
                sign = 1.0;
            }
        }
        model.constraints.push_back(std::move(con));
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '\\') continue;
        if (line == "Minimize" || line == "Subject To" || line == "Binary" || line == "End") {
            if (section == "Subject To") flush(pending);
            pending.clear();
            section = line;
            continue;
        }
        if (section == "Minimize") {
            std::istringstream ss(line.substr(line.find(':') == std::string::npos ? 0 : line.find(':') + 1));
            std::string tok;
            while (ss >> tok)
                if (tok != "+") model.objective_vars.push_back(tok);
        } else if (section == "Subject To") {
            const bool starts_new = line.find(':') != std::string::npos;
            if (starts_new) {
                flush(pending);
                pending = line;
            } else {
                pending += " " + line;
            }
        }
    }
    flush(pending);
    return model;
}

}  // namespace

TEST_CASE("exported model is satisfied by the exact witness") {
    Rng rng(151);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 3 + static_cast<int>(rng_below(rng, 2));
        PatternMatrix A = random_pattern(rng, n, 0.4);
        if (A.nnz() == 0) continue;
        const std::string path =
            (std::filesystem::temp_directory_path() / "diagpack_witness.lp").string();
        export_ilp(A, path);
        LpModel model = parse_lp(path);

        ExactResult ex = exact_cbs2d(A);
        // assignment induced by the witness: positions plus the used residues
        std::map<std::string, double> value;
        for (int i = 0; i < n; ++i)
            for (int p = 0; p < n; ++p) {
                value["p_" + std::to_string(i) + "_" + std::to_string(p)] = ex.pr.forward[i] == p;
                value["q_" + std::to_string(i) + "_" + std::to_string(p)] = ex.pc.forward[i] == p;
            }
        DiagState st = count_diagonals(A, ex.pr, ex.pc);
        for (int k = 0; k < n; ++k) value["z_" + std::to_string(k)] = st.diag_nnz[k] > 0;

        for (const auto& con : model.constraints) {
            double lhs = 0.0;
            for (const auto& term : con.terms) {
                REQUIRE(value.count(term.var));
                lhs += term.coef * value[term.var];
            }
            if (con.op == '=') CHECK(lhs == con.rhs);
            else CHECK(lhs >= con.rhs);
        }
        double objective = 0.0;
        for (const std::string& v : model.objective_vars) objective += value[v];
        CHECK(objective == ex.optimum);
    }
}

TEST_CASE("exact witnesses satisfy the reported optimum on mixed samples") {
    Rng rng(83);
    for (int t = 0; t < 30; ++t) {
        const int n = 3 + static_cast<int>(rng_below(rng, 3));
        PatternMatrix A = random_pattern(rng, n, 0.45);
        ExactResult r = exact_cbs2d(A);
        CHECK(count_diagonals(A, r.pr, r.pc).num_diags == r.optimum);
        CHECK(r.pr.forward[0] == 0);  // the pinned row position survives in the witness
    }
}
