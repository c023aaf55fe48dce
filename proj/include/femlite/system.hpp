// system.hpp: load vector, boundary-condition handling, and error norms.
//
// The load uses the edge-midpoint rule in 2-D (each vertex i receives
// area * (f(mid_j) + f(mid_k)) / 6 from the two midpoints where phi_i is
// nonzero) and the 4-point order-2 tetrahedron rule in 3-D. Dirichlet data
// never modifies A: the lift u_D is subtracted from the right-hand side and
// the solve is restricted to the free nodes. Neumann data enters through
// face-midpoint quadrature.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "femlite/assembly.hpp"
#include "femlite/error.hpp"
#include "femlite/mesh.hpp"
#include "femlite/quadrature.hpp"
#include "femlite/sparse.hpp"

namespace femlite {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Poisson problem data: -Lap u = f, u = g_dirichlet on flagged-1 faces,
/// du/dn = g_neumann on flagged-2 faces. A null g_dirichlet together with a
/// mesh that has no Dirichlet faces selects the pure-Neumann path; null f or
/// g_neumann mean zero data.
struct PoissonProblem {
    ScalarField f;
    ScalarField g_dirichlet;
    ScalarField g_neumann;
};

struct BoundaryPartition {
    std::vector<index_t> dirichlet_nodes; // ascending
    std::vector<index_t> free_nodes;      // ascending complement
    FaceList dirichlet_faces;
    FaceList neumann_faces;
};

/// Node/face partition induced by the mesh's boundary flags. Dirichlet nodes
/// are found by boolean marking over the Dirichlet faces (no sort-unique).
/// Robin flags are rejected here, at system-build time; the mesh layer
/// parses and reports them but no assembly is defined for them.
inline BoundaryPartition partition_boundary(const Mesh& mesh) {
    for (index_t t = 0; t < mesh.num_elems(); ++t)
        for (int f = 0; f <= mesh.dim(); ++f)
            if (mesh.flag(t, f) == 3)
                throw Error(ErrorCode::unsupported_boundary_type,
                            "Robin boundary (flag 3) on element " + std::to_string(t) +
                                " is not supported");
    BoundaryPartition part;
    part.dirichlet_faces = boundary_faces(mesh, 1);
    part.neumann_faces = boundary_faces(mesh, 2);
    const index_t n = mesh.num_nodes();
    std::vector<bool> is_dirichlet(static_cast<std::size_t>(n), false);
    for (index_t v : part.dirichlet_faces.faces) is_dirichlet[static_cast<std::size_t>(v)] = true;
    for (index_t k = 0; k < n; ++k)
        (is_dirichlet[static_cast<std::size_t>(k)] ? part.dirichlet_nodes : part.free_nodes)
            .push_back(k);
    return part;
}

/// Load vector b_i = int f phi_i, accumulated with the sparse module's
/// accumulate over one index/value slice per local vertex.
inline std::vector<double> assemble_load(const Mesh& mesh, const ScalarField& f) {
    const index_t n = mesh.num_nodes();
    const index_t nt = mesh.num_elems();
    if (!f) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
    const int d = mesh.dim();
    const int nv = d + 1;

    std::vector<double> contrib(std::size_t(nv) * nt, 0.0); // [local][element]
    double verts[12];
    if (d == 2) {
        for (index_t t = 0; t < nt; ++t) {
            detail::gather_vertices(mesh, t, verts);
            const double area =
                std::abs(signed_area(&verts[0], &verts[2], &verts[4]));
            double fmid[3];
            for (int i = 0; i < 3; ++i) {
                const int a = kTriFaces[i][0], b = kTriFaces[i][1];
                const Point mid{(verts[2 * a] + verts[2 * b]) / 2.0,
                                (verts[2 * a + 1] + verts[2 * b + 1]) / 2.0, 0.0};
                fmid[i] = f(mid);
            }
            // vertex i sees the two midpoints not opposite to it
            for (int i = 0; i < 3; ++i)
                contrib[std::size_t(i) * nt + t] =
                    area * (fmid[(i + 1) % 3] + fmid[(i + 2) % 3]) / 6.0;
        }
    } else {
        const QuadRule qr = rule(3, RuleName::tet4);
        for (index_t t = 0; t < nt; ++t) {
            detail::gather_vertices(mesh, t, verts);
            const double volume =
                std::abs(signed_volume(&verts[0], &verts[3], &verts[6], &verts[9]));
            for (std::size_t q = 0; q < qr.size(); ++q) {
                const double* lambda = qr.point(q);
                Point x{0.0, 0.0, 0.0};
                for (int k = 0; k < 4; ++k)
                    for (int c = 0; c < 3; ++c) x[c] += lambda[k] * verts[std::size_t(k) * 3 + c];
                const double w = volume * qr.weights[q] * f(x);
                for (int i = 0; i < 4; ++i) contrib[std::size_t(i) * nt + t] += w * lambda[i];
            }
        }
    }

    // column-major element list: all first vertices, then all second, ...
    std::vector<index_t> idx(std::size_t(nv) * nt);
    for (int i = 0; i < nv; ++i)
        for (index_t t = 0; t < nt; ++t) idx[std::size_t(i) * nt + t] = mesh.elem(t)[i];
    return accumulate(idx, contrib, n);
}

/// Add the Neumann boundary integral: length * g(midpoint) / 2 to each edge
/// endpoint in 2-D, area * g(barycenter) / 3 to each face vertex in 3-D.
inline std::vector<double> apply_neumann(std::vector<double> b, const Mesh& mesh,
                                         const ScalarField& g) {
    if (static_cast<index_t>(b.size()) != mesh.num_nodes())
        throw Error(ErrorCode::shape_mismatch, "apply_neumann: vector length mismatch");
    const FaceList faces = boundary_faces(mesh, 2);
    if (faces.size() == 0 || !g) return b;
    const int d = mesh.dim();
    const index_t n = mesh.num_nodes();

    std::vector<index_t> idx;
    std::vector<double> vals;
    idx.reserve(faces.size() * d);
    vals.reserve(faces.size() * d);
    for (std::size_t r = 0; r < faces.size(); ++r) {
        const index_t* fv = faces.face(r);
        if (d == 2) {
            const double* p0 = mesh.node(fv[0]);
            const double* p1 = mesh.node(fv[1]);
            const double ex = p1[0] - p0[0], ey = p1[1] - p0[1];
            const double length = std::sqrt(ex * ex + ey * ey);
            const Point mid{(p0[0] + p1[0]) / 2.0, (p0[1] + p1[1]) / 2.0, 0.0};
            const double share = length * g(mid) / 2.0;
            for (int k = 0; k < 2; ++k) {
                idx.push_back(fv[k]);
                vals.push_back(share);
            }
        } else {
            const double* p0 = mesh.node(fv[0]);
            const double* p1 = mesh.node(fv[1]);
            const double* p2 = mesh.node(fv[2]);
            double u[3], v[3], cr[3];
            for (int c = 0; c < 3; ++c) {
                u[c] = p1[c] - p0[c];
                v[c] = p2[c] - p0[c];
            }
            detail::cross3(u, v, cr);
            const double area = 0.5 * std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
            const Point bc{(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0,
                           (p0[2] + p1[2] + p2[2]) / 3.0};
            const double share = area * g(bc) / 3.0;
            for (int k = 0; k < 3; ++k) {
                idx.push_back(fv[k]);
                vals.push_back(share);
            }
        }
    }
    const std::vector<double> add = accumulate(idx, vals, n);
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += add[k];
    return b;
}

struct DirichletSystem {
    std::vector<double> u0;    // g_D at Dirichlet nodes, zero elsewhere
    std::vector<double> b;     // b - A * u0
    BoundaryPartition partition;
};

/// Impose Dirichlet data as a lift: A is left untouched, the right-hand side
/// becomes b - A u0 and the caller solves on partition.free_nodes only.
inline DirichletSystem apply_dirichlet(const CscMatrix& a, std::span<const double> b,
                                       const Mesh& mesh, const ScalarField& g) {
    DirichletSystem sys;
    sys.partition = partition_boundary(mesh);
    if (sys.partition.dirichlet_faces.size() == 0)
        throw Error(ErrorCode::no_dirichlet_boundary,
                    "mesh has no Dirichlet faces; use the pure-Neumann path");
    const index_t n = mesh.num_nodes();
    if (a.m != n || a.n != n || static_cast<index_t>(b.size()) != n)
        throw Error(ErrorCode::shape_mismatch, "apply_dirichlet: size mismatch");

    sys.u0.assign(static_cast<std::size_t>(n), 0.0);
    for (index_t k : sys.partition.dirichlet_nodes)
        sys.u0[static_cast<std::size_t>(k)] = g(mesh.node_point(k));

    const std::vector<double> au0 = matvec(a, sys.u0);
    sys.b.resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) sys.b[k] = b[k] - au0[k];
    return sys;
}

/// Subtract the mean so the pure-Neumann right-hand side satisfies the
/// discrete compatibility condition mean(b) = 0.
inline std::vector<double> enforce_compatibility(std::vector<double> b) {
    if (b.empty()) return b;
    double mean = 0.0;
    for (double v : b) mean += v;
    mean /= static_cast<double>(b.size());
    for (double& v : b) v -= mean;
    return b;
}

/// Shift a nodal field so its piecewise-linear interpolant has zero average:
/// c = sum_t mean(u at vertices of t) |t| / sum_t |t|. Exact for P1 since the
/// vertex average equals the element mean.
inline std::vector<double> zero_average_shift(const Mesh& mesh, std::vector<double> u) {
    if (static_cast<index_t>(u.size()) != mesh.num_nodes())
        throw Error(ErrorCode::shape_mismatch, "zero_average_shift: vector length mismatch");
    const int d = mesh.dim();
    double weighted = 0.0, total = 0.0;
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        const double m = std::abs(signed_measure(mesh, t));
        const index_t* v = mesh.elem(t);
        double avg = 0.0;
        for (int k = 0; k <= d; ++k) avg += u[static_cast<std::size_t>(v[k])];
        avg /= (d + 1);
        weighted += avg * m;
        total += m;
    }
    const double c = weighted / total;
    for (double& x : u) x -= c;
    return u;
}

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};

/// L2 and H1-seminorm errors of a nodal field against exact fields, using the
/// order-2 rule of the mesh dimension. The element gradient is assembled in
/// difference form sum_i (u_i - u_0) grad(lambda_i) so constant shifts of u_h
/// cancel instead of leaving roundoff.
inline ErrorNorms error_norms(const Mesh& mesh, std::span<const double> u_h,
                              const ScalarField& exact, const VectorField& grad_exact) {
    if (static_cast<index_t>(u_h.size()) != mesh.num_nodes())
        throw Error(ErrorCode::shape_mismatch, "error_norms: vector length mismatch");
    const int d = mesh.dim();
    const QuadRule qr = rule(d, d == 2 ? RuleName::midpoint_edges : RuleName::tet4);
    double l2_sq = 0.0, h1_sq = 0.0;
    double verts[12];
    double grads[4][3];
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        detail::gather_vertices(mesh, t, verts);
        const index_t* v = mesh.elem(t);
        const double measure =
            d == 2 ? std::abs(signed_area(&verts[0], &verts[2], &verts[4]))
                   : std::abs(signed_volume(&verts[0], &verts[3], &verts[6], &verts[9]));

        barycentric_gradients(d, std::span<const double>(verts, std::size_t(d + 1) * d), grads);
        const double u0 = u_h[static_cast<std::size_t>(v[0])];
        double grad_uh[3] = {0.0, 0.0, 0.0};
        for (int i = 1; i <= d; ++i) {
            const double du = u_h[static_cast<std::size_t>(v[i])] - u0;
            for (int c = 0; c < 3; ++c) grad_uh[c] += du * grads[i][c];
        }

        for (std::size_t q = 0; q < qr.size(); ++q) {
            const double* lambda = qr.point(q);
            Point x{0.0, 0.0, 0.0};
            double uh = 0.0;
            for (int k = 0; k <= d; ++k) {
                uh += lambda[k] * u_h[static_cast<std::size_t>(v[k])];
                for (int c = 0; c < d; ++c) x[c] += lambda[k] * verts[std::size_t(k) * d + c];
            }
            const double diff = uh - exact(x);
            l2_sq += measure * qr.weights[q] * diff * diff;
            if (grad_exact) {
                const Point ge = grad_exact(x);
                double gsq = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double gd = grad_uh[c] - ge[c];
                    gsq += gd * gd;
                }
                h1_sq += measure * qr.weights[q] * gsq;
            }
        }
    }
    return {std::sqrt(l2_sq), std::sqrt(h1_sq)};
}

} // namespace femlite
