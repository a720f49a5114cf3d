#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diagpack/pattern.hpp"

namespace diagpack {

/// Thrown for unreadable/malformed input files; carries the offending line.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
    IoError(const std::string& path, long line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

enum class LoadMode { PatternOnly, Valued };

namespace detail {

inline std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

/// Reads a Matrix Market coordinate file into a PatternMatrix.
///
/// Only the coordinate variant is accepted (the array variant is rejected);
/// general/symmetric/skew-symmetric/hermitian storage is supported, with
/// mirrored entries materialized. Declared shapes must be square. Duplicate
/// coordinates are merged and, in valued mode, explicit zeros are dropped
/// from the pattern.
inline PatternMatrix load_matrix_market(const std::string& path, LoadMode mode = LoadMode::PatternOnly) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw IoError(path, 1, "empty file");
    ++lineno;

    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || detail::lower(object) != "matrix")
        throw IoError(path, lineno, "malformed Matrix Market header");
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (format != "coordinate")
        throw IoError(path, lineno, "unsupported format '" + format + "' (coordinate only)");
    if (field != "real" && field != "integer" && field != "pattern" && field != "complex")
        throw IoError(path, lineno, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" &&
        symmetry != "hermitian")
        throw IoError(path, lineno, "unsupported symmetry '" + symmetry + "'");

    // Skip comments and blank lines before the size line.
    long rows = -1, cols = -1;
    long declared_nnz = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> declared_nnz))
            throw IoError(path, lineno, "malformed size line");
        break;
    }
    if (rows < 0) throw IoError(path, lineno, "missing size line");
    if (rows != cols)
        throw IoError(path, lineno, "non-square matrix (" + std::to_string(rows) + "x" + std::to_string(cols) + ")");

    const int n = static_cast<int>(rows);
    const bool with_values = (mode == LoadMode::Valued);
    const bool pattern_field = (field == "pattern");
    const bool complex_field = (field == "complex");

    std::vector<Coord> coords;
    coords.reserve(static_cast<std::size_t>(declared_nnz));
    long seen = 0;
    while (seen < declared_nnz && std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        long i1 = 0, j1 = 0;
        double re = 1.0, im = 0.0;
        if (!(ss >> i1 >> j1)) throw IoError(path, lineno, "malformed entry");
        if (!pattern_field) {
            if (!(ss >> re)) throw IoError(path, lineno, "missing value");
            if (complex_field && !(ss >> im)) throw IoError(path, lineno, "missing imaginary part");
        }
        if (i1 < 1 || i1 > rows || j1 < 1 || j1 > cols)
            throw IoError(path, lineno, "index out of declared bounds");
        ++seen;
        if (with_values && !pattern_field && re == 0.0 && im == 0.0)
            continue;  // explicit zero, no pattern entry
        const int i = static_cast<int>(i1 - 1);
        const int j = static_cast<int>(j1 - 1);
        coords.push_back({i, j, re});
        if (symmetry != "general" && i != j) {
            double mirrored = re;
            if (symmetry == "skew-symmetric") mirrored = -re;
            coords.push_back({j, i, mirrored});
        }
    }
    if (seen < declared_nnz)
        throw IoError(path, lineno, "expected " + std::to_string(declared_nnz) + " entries, got " +
                                        std::to_string(seen));
    return PatternMatrix::from_coords(n, std::move(coords), with_values);
}

/// Writes a coordinate Matrix Market file (general storage, 1-based indices).
inline void write_matrix_market(const PatternMatrix& A, const std::string& path, bool with_values = false) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out.precision(17);  // values survive a write/read round trip
    out << "%%MatrixMarket matrix coordinate " << (with_values ? "real" : "pattern") << " general\n";
    out << A.n() << " " << A.n() << " " << A.nnz() << "\n";
    for (const Coord& c : A.coords()) {
        out << (c.row + 1) << " " << (c.col + 1);
        if (with_values) out << " " << c.val;
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

/// Permutation pair file: line 1 is n, line 2 the row forward map,
/// line 3 the column forward map. ASCII, newline-terminated.
inline void write_permutations(const Permutation& pr, const Permutation& pc, const std::string& path) {
    if (pr.size() != pc.size()) throw std::invalid_argument("row/column permutation sizes differ");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << pr.size() << "\n";
    for (int i = 0; i < pr.size(); ++i) out << pr.forward[i] << (i + 1 < pr.size() ? ' ' : '\n');
    for (int i = 0; i < pc.size(); ++i) out << pc.forward[i] << (i + 1 < pc.size() ? ' ' : '\n');
    if (pr.size() == 0) out << "\n\n";
    if (!out) throw IoError("write failed for " + path);
}

inline std::pair<Permutation, Permutation> read_permutations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    long n = -1;
    if (!(in >> n) || n < 0) throw IoError(path, 1, "malformed permutation file");
    auto read_map = [&](long lineno) {
        std::vector<int> fwd(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i)
            if (!(in >> fwd[static_cast<std::size_t>(i)]))
                throw IoError(path, lineno, "truncated permutation");
        try {
            return Permutation::from_forward(std::move(fwd));
        } catch (const std::invalid_argument&) {
            throw IoError(path, lineno, "not a bijection");
        }
    };
    Permutation pr = read_map(2);
    Permutation pc = read_map(3);
    return {std::move(pr), std::move(pc)};
}

}  // namespace diagpack
