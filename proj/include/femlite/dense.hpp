// dense.hpp: minimal row-major dense matrix, used by the dense assembly
// oracle and the direct solver. Kept deliberately small; large problems go
// through CscMatrix.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "femlite/error.hpp"
#include "femlite/sparse.hpp"

namespace femlite {

// Dense paths refuse to allocate beyond this many rows (~32 MB at 2000^2).
inline constexpr index_t kDenseGuardLimit = 2000;

class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {}

    index_t rows() const noexcept { return rows_; }
    index_t cols() const noexcept { return cols_; }

    double& operator()(index_t r, index_t c) {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    double operator()(index_t r, index_t c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    std::span<const double> data() const noexcept { return data_; }

private:
    index_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Dense -> CSC, dropping exact zeros; columns scanned in order so the
/// result is canonical.
inline CscMatrix to_csc(const DenseMatrix& a) {
    CscMatrix out;
    out.m = a.rows();
    out.n = a.cols();
    out.col_ptr.assign(static_cast<std::size_t>(a.cols()) + 1, 0);
    for (index_t c = 0; c < a.cols(); ++c) {
        for (index_t r = 0; r < a.rows(); ++r)
            if (a(r, c) != 0.0) {
                out.row_idx.push_back(r);
                out.values.push_back(a(r, c));
            }
        out.col_ptr[static_cast<std::size_t>(c) + 1] = static_cast<index_t>(out.row_idx.size());
    }
    return out;
}

/// CSC -> dense; guarded against accidental large allocations.
inline DenseMatrix to_dense(const CscMatrix& a) {
    if (a.m > kDenseGuardLimit || a.n > kDenseGuardLimit)
        throw Error(ErrorCode::too_large_for_dense,
                    "matrix " + std::to_string(a.m) + " x " + std::to_string(a.n) +
                        " exceeds the dense guard (" + std::to_string(kDenseGuardLimit) + ")");
    DenseMatrix out(a.m, a.n);
    for (index_t c = 0; c < a.n; ++c)
        for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k)
            out(a.row_idx[k], c) = a.values[k];
    return out;
}

} // namespace femlite
