// assembly.hpp: global stiffness matrix a_ij = int grad(phi_j) . grad(phi_i)
// by three strategies that must agree:
//
//   dense_oracle  per-entry accumulation into a dense matrix (guarded small),
//                 local matrices through the reference-element affine map;
//   triplet_loop  element-by-element triplet recording, one sparse build;
//   blockwise     bulk edge-vector / face-normal arrays, triplets filled one
//                 (i, j) local-pair block at a time.
//
// The blockwise local entries use grad(lambda_i) = n_i / (d! |tau|) with n_i
// the scaled inward face normal: a rotated edge vector in 2-D, a cross
// product of two face edge vectors in 3-D. Face vertex orderings follow
// kTriFaces/kTetFaces so the normals point inward without sign fixes.

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "femlite/dense.hpp"
#include "femlite/error.hpp"
#include "femlite/mesh.hpp"
#include "femlite/sparse.hpp"

namespace femlite {

/// Per-element stiffness block. Symmetric, rows sum to zero, diagonal
/// positive; `measure` is the unsigned element measure.
struct LocalStiffness {
    int dim = 2;
    double measure = 0.0;
    std::array<double, 16> a{}; // (dim+1)^2 entries, row-major

    double entry(int i, int j) const { return a[std::size_t(i) * (dim + 1) + j]; }
    double& entry(int i, int j) { return a[std::size_t(i) * (dim + 1) + j]; }
};

enum class AssemblyStrategy { dense_oracle, triplet_loop, blockwise };

namespace detail {

inline void check_local_input(int dim, std::span<const double> vertices) {
    check_dim(dim);
    if (static_cast<int>(vertices.size()) != (dim + 1) * dim)
        throw Error(ErrorCode::shape_mismatch, "expected (dim+1) x dim vertex array");
}

[[noreturn]] inline void throw_degenerate() {
    throw Error(ErrorCode::degenerate_element, "degenerate simplex in local stiffness");
}

// solve B y = g for 2x2 / 3x3 B via Cramer's rule
inline void solve2(const double b[2][2], double det, const double g[2], double y[2]) {
    y[0] = (b[1][1] * g[0] - b[0][1] * g[1]) / det;
    y[1] = (-b[1][0] * g[0] + b[0][0] * g[1]) / det;
}

inline double det3(const double b[3][3]) {
    return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
           b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
           b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
}

inline void solve3(const double b[3][3], double det, const double g[3], double y[3]) {
    double bk[3][3];
    for (int col = 0; col < 3; ++col) {
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) bk[r][c] = (c == col) ? g[r] : b[r][c];
        y[col] = det3(bk) / det;
    }
}

inline void cross3(const double u[3], const double v[3], double out[3]) {
    out[0] = u[1] * v[2] - u[2] * v[1];
    out[1] = u[2] * v[0] - u[0] * v[2];
    out[2] = u[0] * v[1] - u[1] * v[0];
}

} // namespace detail

/// Local stiffness through the affine map from the reference simplex
/// (2-D reference triangle (1,0), (0,1), (0,0); the last vertex is the
/// origin, so B's rows are v_i - v_{d+1} and the reference barycentric
/// gradients are the unit vectors plus (-1,...,-1)).
inline LocalStiffness local_stiffness_reference(int dim, std::span<const double> vertices) {
    detail::check_local_input(dim, vertices);
    LocalStiffness out;
    out.dim = dim;
    if (dim == 2) {
        const double* p1 = &vertices[0];
        const double* p2 = &vertices[2];
        const double* p3 = &vertices[4];
        const double b[2][2] = {{p1[0] - p3[0], p1[1] - p3[1]},
                                {p2[0] - p3[0], p2[1] - p3[1]}};
        const double det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        if (det == 0.0) detail::throw_degenerate();
        const double area = 0.5 * std::abs(det);
        out.measure = area;
        const double ghat[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, -1.0}};
        double grads[3][2];
        for (int i = 0; i < 3; ++i) detail::solve2(b, det, ghat[i], grads[i]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.entry(i, j) = area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
    } else {
        const double* p4 = &vertices[9];
        double b[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) b[r][c] = vertices[std::size_t(r) * 3 + c] - p4[c];
        const double det = detail::det3(b);
        if (det == 0.0) detail::throw_degenerate();
        const double volume = std::abs(det) / 6.0;
        out.measure = volume;
        const double ghat[4][3] = {
            {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {-1.0, -1.0, -1.0}};
        double grads[4][3];
        for (int i = 0; i < 4; ++i) detail::solve3(b, det, ghat[i], grads[i]);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                out.entry(i, j) = volume * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1] +
                                            grads[i][2] * grads[j][2]);
    }
    return out;
}

namespace detail {

// Scaled inward normals n_i (magnitude (d-1)! |F_i|) and the unsigned
// measure; grad(lambda_i) = n_i / (d! |tau|).
inline double scaled_normals(int dim, std::span<const double> vertices, double normals[4][3]) {
    if (dim == 2) {
        const double* v[3] = {&vertices[0], &vertices[2], &vertices[4]};
        // e_i joins the two vertices of the face opposite vertex i
        double e[3][2];
        for (int i = 0; i < 3; ++i) {
            const int a = kTriFaces[i][1], b = kTriFaces[i][0];
            e[i][0] = v[a][0] - v[b][0];
            e[i][1] = v[a][1] - v[b][1];
        }
        const double area = 0.5 * std::abs(-e[2][0] * e[1][1] + e[2][1] * e[1][0]);
        if (area == 0.0) throw_degenerate();
        for (int i = 0; i < 3; ++i) {
            normals[i][0] = -e[i][1];
            normals[i][1] = e[i][0];
            normals[i][2] = 0.0;
        }
        return area;
    }
    const double* v[4] = {&vertices[0], &vertices[3], &vertices[6], &vertices[9]};
    double v12[4][3], v13[4][3];
    for (int i = 0; i < 4; ++i) {
        const int f0 = kTetFaces[i][0], f1 = kTetFaces[i][1], f2 = kTetFaces[i][2];
        for (int c = 0; c < 3; ++c) {
            v12[i][c] = v[f1][c] - v[f0][c];
            v13[i][c] = v[f2][c] - v[f0][c];
        }
        cross3(v12[i], v13[i], normals[i]);
    }
    // mixed product of the edge vectors of the (0,1,2) face with v14
    double v14[3];
    for (int c = 0; c < 3; ++c) v14[c] = v[3][c] - v[0][c];
    double cr[3];
    cross3(v12[3], v13[3], cr);
    const double volume = std::abs(cr[0] * v14[0] + cr[1] * v14[1] + cr[2] * v14[2]) / 6.0;
    if (volume == 0.0) throw_degenerate();
    return volume;
}

} // namespace detail

/// Local stiffness from scaled face normals: a_ij = n_i . n_j / (d!^2 |tau|).
inline LocalStiffness local_stiffness_normals(int dim, std::span<const double> vertices) {
    detail::check_local_input(dim, vertices);
    LocalStiffness out;
    out.dim = dim;
    double normals[4][3];
    const double measure = detail::scaled_normals(dim, vertices, normals);
    out.measure = measure;
    const double divisor = (dim == 2) ? 4.0 * measure : 36.0 * measure;
    for (int i = 0; i <= dim; ++i)
        for (int j = 0; j <= dim; ++j)
            out.entry(i, j) = (normals[i][0] * normals[j][0] + normals[i][1] * normals[j][1] +
                               normals[i][2] * normals[j][2]) /
                              divisor;
    return out;
}

/// Barycentric gradients grad(lambda_i) of an element, via the scaled-normal
/// formula; used for piecewise gradients of nodal fields.
inline void barycentric_gradients(int dim, std::span<const double> vertices,
                                  double grads[4][3]) {
    double normals[4][3];
    const double measure = detail::scaled_normals(dim, vertices, normals);
    const double factor = (dim == 2) ? 2.0 * measure : 6.0 * measure;
    for (int i = 0; i <= dim; ++i)
        for (int c = 0; c < 3; ++c) grads[i][c] = normals[i][c] / factor;
}

namespace detail {

inline void gather_vertices(const Mesh& mesh, index_t t, double* out) {
    const int d = mesh.dim();
    const index_t* v = mesh.elem(t);
    for (int k = 0; k <= d; ++k) {
        const double* p = mesh.node(v[k]);
        for (int c = 0; c < d; ++c) out[std::size_t(k) * d + c] = p[c];
    }
}

} // namespace detail

/// Reference per-entry accumulation into a dense matrix. Refuses meshes with
/// more than kDenseGuardLimit nodes: the O(N^2) storage is the point of the
/// guard, not a missing feature.
inline DenseMatrix assemble_standard_dense(const Mesh& mesh) {
    const index_t n = mesh.num_nodes();
    if (n > kDenseGuardLimit)
        throw Error(ErrorCode::too_large_for_dense,
                    "dense assembly limited to " + std::to_string(kDenseGuardLimit) +
                        " nodes, mesh has " + std::to_string(n));
    const int d = mesh.dim();
    DenseMatrix a(n, n);
    double verts[12];
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        detail::gather_vertices(mesh, t, verts);
        const LocalStiffness at =
            local_stiffness_reference(d, std::span<const double>(verts, std::size_t(d + 1) * d));
        const index_t* v = mesh.elem(t);
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) a(v[i], v[j]) += at.entry(i, j);
    }
    return a;
}

/// Element-major triplet recording, one duplicate-summing sparse build.
inline CscMatrix assemble_triplets(const Mesh& mesh) {
    const int d = mesh.dim();
    const index_t n = mesh.num_nodes();
    const index_t nt = mesh.num_elems();
    Triplets trip(n, n);
    trip.reserve(std::size_t(nt) * (d + 1) * (d + 1));
    double verts[12];
    for (index_t t = 0; t < nt; ++t) {
        detail::gather_vertices(mesh, t, verts);
        const LocalStiffness at =
            local_stiffness_reference(d, std::span<const double>(verts, std::size_t(d + 1) * d));
        const index_t* v = mesh.elem(t);
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) trip.push(v[i], v[j], at.entry(i, j));
    }
    return from_triplets(trip);
}

/// Bulk strategy: all edge vectors / face normals and measures first, then
/// one NT-length triplet slice per (i, j) local pair. With symmetric_fill
/// only the upper local pairs are computed and mirrored (changes the triplet
/// multiset, hence off by default).
inline CscMatrix assemble_blockwise(const Mesh& mesh, bool symmetric_fill = false) {
    const int d = mesh.dim();
    const index_t n = mesh.num_nodes();
    const index_t nt = mesh.num_elems();
    const std::size_t count = static_cast<std::size_t>(nt);

    // bulk geometry: normals[i] is an NT x 3 array, measure is NT
    std::vector<double> normals(std::size_t(d + 1) * count * 3);
    std::vector<double> measure(count);
    auto normal_at = [&](int i, std::size_t t) {
        return normals.data() + (std::size_t(i) * count + t) * 3;
    };
    double verts[12];
    double local[4][3];
    for (index_t t = 0; t < nt; ++t) {
        detail::gather_vertices(mesh, t, verts);
        measure[std::size_t(t)] = detail::scaled_normals(
            d, std::span<const double>(verts, std::size_t(d + 1) * d), local);
        for (int i = 0; i <= d; ++i)
            for (int c = 0; c < 3; ++c) normal_at(i, std::size_t(t))[c] = local[i][c];
    }

    const double factor = (d == 2) ? 4.0 : 36.0;
    Triplets trip(n, n);
    trip.reserve(std::size_t(nt) * (d + 1) * (d + 1));
    for (int i = 0; i <= d; ++i) {
        for (int j = symmetric_fill ? i : 0; j <= d; ++j) {
            for (std::size_t t = 0; t < count; ++t) {
                const double* ni = normal_at(i, t);
                const double* nj = normal_at(j, t);
                const double s =
                    (ni[0] * nj[0] + ni[1] * nj[1] + ni[2] * nj[2]) / (factor * measure[t]);
                const index_t* v = mesh.elem(static_cast<index_t>(t));
                trip.push(v[i], v[j], s);
                if (symmetric_fill && j > i) trip.push(v[j], v[i], s);
            }
        }
    }
    return from_triplets(trip);
}

inline CscMatrix assemble(const Mesh& mesh, AssemblyStrategy strategy) {
    switch (strategy) {
    case AssemblyStrategy::dense_oracle: return to_csc(assemble_standard_dense(mesh));
    case AssemblyStrategy::triplet_loop: return assemble_triplets(mesh);
    case AssemblyStrategy::blockwise: return assemble_blockwise(mesh);
    }
    throw Error(ErrorCode::invalid_parameter, "unknown assembly strategy");
}

} // namespace femlite
