// sparse.hpp: triplet ingestion and compressed sparse column storage.
//
// Construction sorts triplets into column-major order with two stable
// counting-sort passes (row key first, column key second), then compacts
// duplicates by summation, dropping entries whose sum is exactly zero. The
// summation order inside each duplicate group is the original input order,
// so results are deterministic for a fixed input sequence. Cost is linear
// in the number of triplets.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "femlite/error.hpp"
#include "femlite/mesh.hpp" // index_t

namespace femlite {

/// Coordinate-format entries: duplicates allowed, any order.
struct Triplets {
    index_t m = 0, n = 0;
    std::vector<index_t> i;
    std::vector<index_t> j;
    std::vector<double> s;

    Triplets() = default;
    Triplets(index_t m_, index_t n_) : m(m_), n(n_) {}

    std::size_t size() const noexcept { return s.size(); }

    void reserve(std::size_t cap) {
        i.reserve(cap);
        j.reserve(cap);
        s.reserve(cap);
    }

    void push(index_t row, index_t col, double val) {
        i.push_back(row);
        j.push_back(col);
        s.push_back(val);
    }
};

/// Compressed sparse column matrix. Invariants: col_ptr has length n+1 with
/// col_ptr[0] = 0 and col_ptr[n] = nnz; row indices strictly increase within
/// each column; no stored value is exactly zero.
struct CscMatrix {
    index_t m = 0, n = 0;
    std::vector<index_t> col_ptr{0};
    std::vector<index_t> row_idx;
    std::vector<double> values;

    index_t nnz() const noexcept { return static_cast<index_t>(values.size()); }

    bool operator==(const CscMatrix&) const = default;
};

inline CscMatrix from_triplets(const Triplets& t) {
    if (t.i.size() != t.s.size() || t.j.size() != t.s.size())
        throw Error(ErrorCode::shape_mismatch, "triplet arrays differ in length");
    if (t.m < 0 || t.n < 0)
        throw Error(ErrorCode::shape_mismatch, "negative matrix dimension");
    const std::size_t nz = t.size();
    for (std::size_t k = 0; k < nz; ++k) {
        if (t.i[k] < 0 || t.i[k] >= t.m || t.j[k] < 0 || t.j[k] >= t.n)
            throw Error(ErrorCode::index_out_of_range,
                        "triplet (" + std::to_string(t.i[k]) + ", " + std::to_string(t.j[k]) +
                            ") outside " + std::to_string(t.m) + " x " + std::to_string(t.n));
    }

    // Two stable counting sorts: by row, then by column. perm ends up holding
    // the original positions in column-major (j, i) order.
    std::vector<std::uint32_t> perm(nz), tmp(nz);
    for (std::size_t k = 0; k < nz; ++k) perm[k] = static_cast<std::uint32_t>(k);

    auto counting_pass = [nz](const std::vector<index_t>& key, index_t bins,
                              std::vector<std::uint32_t>& src, std::vector<std::uint32_t>& dst) {
        std::vector<std::size_t> count(static_cast<std::size_t>(bins) + 1, 0);
        for (std::size_t k = 0; k < nz; ++k) ++count[static_cast<std::size_t>(key[src[k]]) + 1];
        for (std::size_t b = 1; b <= static_cast<std::size_t>(bins); ++b) count[b] += count[b - 1];
        for (std::size_t k = 0; k < nz; ++k) dst[count[static_cast<std::size_t>(key[src[k]])]++] = src[k];
    };
    if (nz > 0) {
        counting_pass(t.i, t.m, perm, tmp);
        counting_pass(t.j, t.n, tmp, perm);
    }

    CscMatrix a;
    a.m = t.m;
    a.n = t.n;
    a.col_ptr.assign(static_cast<std::size_t>(t.n) + 1, 0);
    a.row_idx.reserve(nz);
    a.values.reserve(nz);
    std::size_t k = 0;
    while (k < nz) {
        const index_t row = t.i[perm[k]];
        const index_t col = t.j[perm[k]];
        double sum = t.s[perm[k]];
        std::size_t k2 = k + 1;
        while (k2 < nz && t.i[perm[k2]] == row && t.j[perm[k2]] == col)
            sum += t.s[perm[k2++]];
        if (sum != 0.0) {
            a.row_idx.push_back(row);
            a.values.push_back(sum);
            ++a.col_ptr[static_cast<std::size_t>(col) + 1];
        }
        k = k2;
    }
    for (index_t c = 0; c < t.n; ++c)
        a.col_ptr[static_cast<std::size_t>(c) + 1] += a.col_ptr[static_cast<std::size_t>(c)];
    return a;
}

/// Inverse of from_triplets: nonzeros in column-major order, i.e. sorted
/// lexicographically by (j, i).
inline Triplets find(const CscMatrix& a) {
    Triplets t(a.m, a.n);
    t.reserve(static_cast<std::size_t>(a.nnz()));
    for (index_t c = 0; c < a.n; ++c)
        for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k)
            t.push(a.row_idx[k], c, a.values[k]);
    return t;
}

/// y = A x, accumulated column by column; O(nnz).
inline std::vector<double> matvec(const CscMatrix& a, std::span<const double> x) {
    if (static_cast<index_t>(x.size()) != a.n)
        throw Error(ErrorCode::shape_mismatch, "matvec: vector length " +
                                                   std::to_string(x.size()) + " != " +
                                                   std::to_string(a.n) + " columns");
    std::vector<double> y(static_cast<std::size_t>(a.m), 0.0);
    for (index_t c = 0; c < a.n; ++c) {
        const double xc = x[static_cast<std::size_t>(c)];
        for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k)
            y[static_cast<std::size_t>(a.row_idx[k])] += a.values[k] * xc;
    }
    return y;
}

namespace detail {

inline void check_index_set(std::span<const index_t> set, index_t bound, const char* what) {
    for (std::size_t p = 0; p < set.size(); ++p) {
        if (set[p] < 0 || set[p] >= bound)
            throw Error(ErrorCode::index_out_of_range,
                        std::string(what) + " index " + std::to_string(set[p]) + " out of range");
        if (p > 0 && set[p] <= set[p - 1])
            throw Error(ErrorCode::unsorted_index_set,
                        std::string(what) + " index set is not strictly increasing");
    }
}

} // namespace detail

/// Extract A(rows, cols) for strictly increasing index sets.
inline CscMatrix submatrix(const CscMatrix& a, std::span<const index_t> rows,
                           std::span<const index_t> cols) {
    detail::check_index_set(rows, a.m, "row");
    detail::check_index_set(cols, a.n, "column");

    std::vector<index_t> row_map(static_cast<std::size_t>(a.m), -1);
    for (std::size_t p = 0; p < rows.size(); ++p)
        row_map[static_cast<std::size_t>(rows[p])] = static_cast<index_t>(p);

    CscMatrix out;
    out.m = static_cast<index_t>(rows.size());
    out.n = static_cast<index_t>(cols.size());
    out.col_ptr.assign(cols.size() + 1, 0);
    for (std::size_t q = 0; q < cols.size(); ++q) {
        const index_t c = cols[q];
        for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k) {
            const index_t r = row_map[static_cast<std::size_t>(a.row_idx[k])];
            if (r < 0) continue;
            out.row_idx.push_back(r);
            out.values.push_back(a.values[k]);
        }
        out.col_ptr[q + 1] = static_cast<index_t>(out.row_idx.size());
    }
    return out;
}

/// Dense accumulation: out[k] = sum of vals where idx == k.
inline std::vector<double> accumulate(std::span<const index_t> idx,
                                      std::span<const double> vals, index_t size) {
    if (idx.size() != vals.size())
        throw Error(ErrorCode::shape_mismatch, "accumulate: index/value lengths differ");
    std::vector<double> out(static_cast<std::size_t>(size), 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= size)
            throw Error(ErrorCode::index_out_of_range,
                        "accumulate: index " + std::to_string(idx[k]) + " out of range");
        out[static_cast<std::size_t>(idx[k])] += vals[k];
    }
    return out;
}

} // namespace femlite
