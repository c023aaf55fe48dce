// matrix_market.hpp: MatrixMarket coordinate format, real general, one-based.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "femlite/error.hpp"
#include "femlite/sparse.hpp"

namespace femlite {

inline void write_matrix_market(const CscMatrix& a, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.m << ' ' << a.n << ' ' << a.nnz() << '\n';
    char buf[32];
    for (index_t c = 0; c < a.n; ++c)
        for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", a.values[k]);
            out << (a.row_idx[k] + 1) << ' ' << (c + 1) << ' ' << buf << '\n';
        }
}

inline void write_matrix_market(const CscMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    write_matrix_market(a, out);
    if (!out) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

inline CscMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) ||
        line.rfind("%%MatrixMarket matrix coordinate real general", 0) != 0)
        throw Error(ErrorCode::parse_error, "not a MatrixMarket coordinate real general file");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        break;
    }
    std::istringstream sizes(line);
    long long m, n, nnz;
    if (!(sizes >> m >> n >> nnz))
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_no) + ": expected 'm n nnz'");
    Triplets t(static_cast<index_t>(m), static_cast<index_t>(n));
    t.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; ++k) {
        if (!std::getline(in, line))
            throw Error(ErrorCode::parse_error, "unexpected end of file in entry list");
        ++line_no;
        std::istringstream entry(line);
        long long i, j;
        double v;
        if (!(entry >> i >> j >> v))
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(line_no) + ": expected 'i j value'");
        if (i < 1 || i > m || j < 1 || j > n)
            throw Error(ErrorCode::parse_error,
                        "line " + std::to_string(line_no) + ": index out of range");
        t.push(static_cast<index_t>(i - 1), static_cast<index_t>(j - 1), v);
    }
    return from_triplets(t);
}

inline CscMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open matrix file '" + path + "'");
    return read_matrix_market(in);
}

} // namespace femlite
