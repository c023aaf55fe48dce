// solver.hpp: preconditioned conjugate gradient on the free-node system, a
// small dense Cholesky as cross-check oracle, and the full Poisson solve
// orchestration including the pure-Neumann path.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "femlite/assembly.hpp"
#include "femlite/dense.hpp"
#include "femlite/error.hpp"
#include "femlite/mesh.hpp"
#include "femlite/sparse.hpp"
#include "femlite/system.hpp"

namespace femlite {

enum class Preconditioner { none, jacobi, auto_select };
enum class SolveMethod { cg, dense_direct };

struct SolveOptions {
    double rel_tol = 1e-10;
    index_t max_iter = 0; // 0 means 10 * N
    Preconditioner preconditioner = Preconditioner::auto_select;
    SolveMethod method = SolveMethod::cg;
    std::optional<index_t> pin_node; // pure-Neumann pinned node, default first
};

struct CgResult {
    std::vector<double> x;
    index_t iterations = 0;
    double relres = 0.0;
    bool converged = true;
};

namespace detail {

// auto_select turns Jacobi on once the reduced system is reasonably large
// (a 32-subdivision square has ~1e3 free nodes)
inline bool use_jacobi(Preconditioner p, index_t n) {
    if (p == Preconditioner::jacobi) return true;
    if (p == Preconditioner::none) return false;
    return n >= 1024;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace detail

/// Conjugate gradient for symmetric positive definite A. Stops when
/// |b - A x| <= rel_tol |b|; b = 0 short-circuits to x = 0. On hitting the
/// iteration cap the best iterate seen is returned with converged = false.
inline CgResult cg_solve(const CscMatrix& a, std::span<const double> b,
                         const SolveOptions& opts = {}) {
    if (a.m != a.n) throw Error(ErrorCode::shape_mismatch, "cg_solve: matrix not square");
    if (static_cast<index_t>(b.size()) != a.n)
        throw Error(ErrorCode::shape_mismatch, "cg_solve: vector length mismatch");
    if (!(opts.rel_tol > 0.0))
        throw Error(ErrorCode::invalid_parameter, "rel_tol must be positive");
    const index_t n = a.n;
    CgResult res;
    res.x.assign(b.size(), 0.0);

    const double bnorm = detail::norm2(b);
    if (bnorm == 0.0) return res;

    const index_t max_iter = opts.max_iter > 0 ? opts.max_iter : 10 * n;
    const bool jacobi = detail::use_jacobi(opts.preconditioner, n);
    std::vector<double> inv_diag;
    if (jacobi) {
        inv_diag.assign(b.size(), 1.0);
        for (index_t c = 0; c < n; ++c)
            for (index_t k = a.col_ptr[c]; k < a.col_ptr[c + 1]; ++k)
                if (a.row_idx[k] == c && a.values[k] != 0.0)
                    inv_diag[static_cast<std::size_t>(c)] = 1.0 / a.values[k];
    }
    auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
        if (!jacobi) {
            z = r;
            return;
        }
        for (std::size_t k = 0; k < r.size(); ++k) z[k] = inv_diag[k] * r[k];
    };

    std::vector<double> r(b.begin(), b.end()); // r = b - A*0
    std::vector<double> z(b.size());
    precondition(r, z);
    std::vector<double> p = z;
    double rz = detail::dot(r, z);

    double best_relres = 1.0;
    std::vector<double> best_x = res.x;

    for (index_t it = 1; it <= max_iter; ++it) {
        const std::vector<double> q = matvec(a, p);
        const double pq = detail::dot(p, q);
        if (pq <= 0.0)
            throw Error(ErrorCode::not_positive_definite,
                        "cg_solve: non-positive curvature encountered");
        const double alpha = rz / pq;
        for (std::size_t k = 0; k < res.x.size(); ++k) {
            res.x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        const double relres = detail::norm2(r) / bnorm;
        if (relres < best_relres) {
            best_relres = relres;
            best_x = res.x;
        }
        if (relres <= opts.rel_tol) {
            res.iterations = it;
            res.relres = relres;
            return res;
        }
        precondition(r, z);
        const double rz_next = detail::dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = z[k] + beta * p[k];
        res.iterations = it;
    }
    res.x = std::move(best_x);
    res.relres = best_relres;
    res.converged = false;
    return res;
}

/// Cholesky solve for small dense SPD systems; the oracle for cg_solve.
inline std::vector<double> dense_direct_solve(const DenseMatrix& a, std::span<const double> b) {
    const index_t n = a.rows();
    if (a.cols() != n) throw Error(ErrorCode::shape_mismatch, "dense solve: matrix not square");
    if (static_cast<index_t>(b.size()) != n)
        throw Error(ErrorCode::shape_mismatch, "dense solve: vector length mismatch");
    if (n > kDenseGuardLimit)
        throw Error(ErrorCode::too_large_for_dense, "dense solve limited to " +
                                                        std::to_string(kDenseGuardLimit) +
                                                        " unknowns");
    // lower-triangular factor, row-major
    std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
    auto lij = [&](index_t r, index_t c) -> double& {
        return l[static_cast<std::size_t>(r) * n + c];
    };
    for (index_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (index_t k = 0; k < j; ++k) diag -= lij(j, k) * lij(j, k);
        if (diag <= 0.0)
            throw Error(ErrorCode::not_positive_definite,
                        "pivot " + std::to_string(j) + " is not positive");
        lij(j, j) = std::sqrt(diag);
        for (index_t r = j + 1; r < n; ++r) {
            double s = a(r, j);
            for (index_t k = 0; k < j; ++k) s -= lij(r, k) * lij(j, k);
            lij(r, j) = s / lij(j, j);
        }
    }
    std::vector<double> y(b.begin(), b.end());
    for (index_t r = 0; r < n; ++r) {
        for (index_t k = 0; k < r; ++k) y[r] -= lij(r, k) * y[k];
        y[r] /= lij(r, r);
    }
    for (index_t rr = 0; rr < n; ++rr) {
        const index_t r = n - 1 - rr;
        for (index_t k = r + 1; k < n; ++k) y[r] -= lij(k, r) * y[k];
        y[r] /= lij(r, r);
    }
    return y;
}

struct Solution {
    std::vector<double> u;
    index_t iterations = 0;
    double final_relres = 0.0;
    BoundaryPartition partition;
};

namespace detail {

struct ReducedSolve {
    std::vector<double> x;
    index_t iterations = 0;
    double relres = 0.0;
};

inline ReducedSolve solve_reduced(const CscMatrix& a_ff, std::span<const double> b_f,
                                  const SolveOptions& opts) {
    if (opts.method == SolveMethod::dense_direct) {
        std::vector<double> x = dense_direct_solve(to_dense(a_ff), b_f);
        const std::vector<double> ax = matvec(a_ff, x);
        double rn = 0.0, bn = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double r = b_f[k] - ax[k];
            rn += r * r;
            bn += b_f[k] * b_f[k];
        }
        return {std::move(x), 0, bn > 0.0 ? std::sqrt(rn / bn) : 0.0};
    }
    CgResult cg = cg_solve(a_ff, b_f, opts);
    if (!cg.converged)
        throw Error(ErrorCode::max_iter_exceeded,
                    "cg did not reach rel_tol " + std::to_string(opts.rel_tol) + " in " +
                        std::to_string(cg.iterations) + " iterations (relres " +
                        std::to_string(cg.relres) + ")");
    return {std::move(cg.x), cg.iterations, cg.relres};
}

} // namespace detail

/// Full solve: assemble (blockwise), build the load, apply Neumann then
/// Dirichlet data, solve the free-node system, and scatter into the nodal
/// vector. With no Dirichlet faces the pure-Neumann path enforces the
/// discrete compatibility condition, pins one node, and shifts the result to
/// zero average. Robin flags (3) are rejected.
inline Solution solve_poisson(const Mesh& mesh, const PoissonProblem& problem,
                              const SolveOptions& opts = {}) {
    Solution sol;
    sol.partition = partition_boundary(mesh); // rejects Robin flags up front

    const index_t n = mesh.num_nodes();
    const CscMatrix a = assemble_blockwise(mesh);
    std::vector<double> b = assemble_load(mesh, problem.f);
    b = apply_neumann(std::move(b), mesh, problem.g_neumann);

    if (sol.partition.dirichlet_faces.size() > 0) {
        if (!problem.g_dirichlet)
            throw Error(ErrorCode::invalid_parameter,
                        "mesh has Dirichlet faces but the problem provides no g_dirichlet");
        DirichletSystem sys = apply_dirichlet(a, b, mesh, problem.g_dirichlet);
        const std::vector<index_t>& free = sys.partition.free_nodes;
        const CscMatrix a_ff = submatrix(a, free, free);
        std::vector<double> b_f(free.size());
        for (std::size_t k = 0; k < free.size(); ++k)
            b_f[k] = sys.b[static_cast<std::size_t>(free[k])];

        detail::ReducedSolve red = detail::solve_reduced(a_ff, b_f, opts);
        sol.u = std::move(sys.u0);
        for (std::size_t k = 0; k < free.size(); ++k)
            sol.u[static_cast<std::size_t>(free[k])] = red.x[k];
        sol.iterations = red.iterations;
        sol.final_relres = red.relres;
        sol.partition = std::move(sys.partition);
        return sol;
    }

    // pure Neumann: fix compatibility, pin one node at zero, shift afterwards
    b = enforce_compatibility(std::move(b));
    const index_t pin = opts.pin_node.value_or(0);
    if (pin < 0 || pin >= n)
        throw Error(ErrorCode::index_out_of_range, "pin_node out of range");
    std::vector<index_t> reduced;
    reduced.reserve(static_cast<std::size_t>(n) - 1);
    for (index_t k = 0; k < n; ++k)
        if (k != pin) reduced.push_back(k);

    const CscMatrix a_rr = submatrix(a, reduced, reduced);
    std::vector<double> b_r(reduced.size());
    for (std::size_t k = 0; k < reduced.size(); ++k)
        b_r[k] = b[static_cast<std::size_t>(reduced[k])];

    detail::ReducedSolve red = detail::solve_reduced(a_rr, b_r, opts);
    sol.u.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < reduced.size(); ++k)
        sol.u[static_cast<std::size_t>(reduced[k])] = red.x[k];
    sol.u = zero_average_shift(mesh, std::move(sol.u));
    sol.iterations = red.iterations;
    sol.final_relres = red.relres;
    return sol;
}

} // namespace femlite
