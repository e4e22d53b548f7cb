#ifndef POLESWAP_MATRIX_MARKET_HPP
#define POLESWAP_MATRIX_MARKET_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <poleswap/pencil.hpp>

namespace poleswap {

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace detail

/// Read a dense square complex matrix in Matrix Market "array complex
/// general" form. Entries are one "Re Im" pair per value in row-major order
/// (the order write_matrix emits). Errors carry line/column positions.
inline Matrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open file");
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line))
        throw ParseError(path + ":1: empty file");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string bang, object, format, field, symmetry;
        hs >> bang >> object >> format >> field >> symmetry;
        if (detail::lower(bang) != "%%matrixmarket" || detail::lower(object) != "matrix" ||
            detail::lower(format) != "array" || detail::lower(field) != "complex" ||
            detail::lower(symmetry) != "general")
            throw ParseError(path + ":1: expected header '%%MatrixMarket matrix array complex general'");
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::string probe = line;
        if (probe.find_first_not_of(" \t\r") == std::string::npos) continue;
        break;
    }
    Index rows = 0, cols = 0;
    {
        std::istringstream ds(line);
        if (!(ds >> rows >> cols) || rows <= 0 || cols <= 0)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'rows cols'");
    }
    if (rows != cols)
        throw ShapeError(path + ": array is " + std::to_string(rows) + "x" + std::to_string(cols) +
                         ", expected a square matrix");

    Matrix M(rows, cols);
    Index count = 0;
    while (count < rows * cols) {
        if (!std::getline(in, line))
            throw ParseError(path + ":" + std::to_string(lineno + 1) + ": file ends after " +
                             std::to_string(count) + " of " + std::to_string(rows * cols) + " entries");
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream es(line);
        double re = 0.0, im = 0.0;
        while (count < rows * cols && (es >> re)) {
            if (!(es >> im))
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": column 2: entry has a real part but no imaginary part");
            M(count / cols, count % cols) = Complex(re, im);
            ++count;
        }
        es.clear();
        std::string junk;
        if (es >> junk)
            throw ParseError(path + ":" + std::to_string(lineno) + ": unparsable token '" + junk + "'");
    }
    return M;
}

/// Write a dense complex matrix as Matrix Market "array complex general",
/// one row-major "Re Im" pair per line with 17 significant digits, enough
/// for a value-exact round trip of finite doubles.
inline void write_matrix(const std::string& path, const Matrix& M) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw Error(path + ": cannot open file for writing");
    std::fprintf(f, "%%%%MatrixMarket matrix array complex general\n");
    std::fprintf(f, "%ld %ld\n", static_cast<long>(M.rows()), static_cast<long>(M.cols()));
    for (Index i = 0; i < M.rows(); ++i)
        for (Index j = 0; j < M.cols(); ++j)
            std::fprintf(f, "%.17g %.17g\n", M(i, j).real(), M(i, j).imag());
    std::fclose(f);
}

} // namespace poleswap

#endif // POLESWAP_MATRIX_MARKET_HPP
