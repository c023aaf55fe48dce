// mesh.hpp: simplicial meshes in 2-D and 3-D with per-face boundary flags.
//
// A mesh is the triple (nodes, elems, bd_flags): vertex coordinates, element
// connectivity, and one small-integer flag per element face. Vertex indices
// are zero-based internally; the text format (mesh_io.hpp) is one-based.
// Face i of an element is the face opposite its local vertex i. Flags:
// 0 interior, 1 Dirichlet, 2 Neumann, 3 Robin.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "femlite/error.hpp"

namespace femlite {

using index_t = std::int32_t;
using Point = std::array<double, 3>; // unused trailing coordinates are zero

// Local faces opposite vertex i, in the extraction order used throughout.
inline constexpr int kTriFaces[3][2] = {{1, 2}, {2, 0}, {0, 1}};
inline constexpr int kTetFaces[4][3] = {{1, 3, 2}, {0, 2, 3}, {0, 3, 1}, {0, 1, 2}};

/// Signed area of the triangle (v1, v2, v3), positive for counter-clockwise
/// ordering. Computed from the edge vectors opposite local vertices 2 and 3.
inline double signed_area(const double* v1, const double* v2, const double* v3) {
    const double e2x = v1[0] - v3[0], e2y = v1[1] - v3[1];
    const double e3x = v2[0] - v1[0], e3y = v2[1] - v1[1];
    return 0.5 * (-e3x * e2y + e3y * e2x);
}

/// Signed volume of the tetrahedron (v1..v4): the mixed product of the three
/// edge vectors at v1, divided by 6. Positive for right-hand-rule ordering.
inline double signed_volume(const double* v1, const double* v2, const double* v3,
                            const double* v4) {
    const double ax = v2[0] - v1[0], ay = v2[1] - v1[1], az = v2[2] - v1[2];
    const double bx = v3[0] - v1[0], by = v3[1] - v1[1], bz = v3[2] - v1[2];
    const double cx = v4[0] - v1[0], cy = v4[1] - v1[1], cz = v4[2] - v1[2];
    const double nx = ay * bz - az * by;
    const double ny = az * bx - ax * bz;
    const double nz = ax * by - ay * bx;
    return (nx * cx + ny * cy + nz * cz) / 6.0;
}

class Mesh;
Mesh make_mesh(int dim, std::vector<double> nodes, std::vector<index_t> elems,
               std::vector<std::int8_t> bd_flags);

/// Immutable simplicial mesh. Construct through make_mesh / generate_mesh /
/// fix_orientation / read_mesh; every constructor path validates the
/// invariants (index range, positive orientation, flag values).
class Mesh {
public:
    int dim() const noexcept { return dim_; }
    index_t num_nodes() const noexcept { return static_cast<index_t>(nodes_.size() / dim_); }
    index_t num_elems() const noexcept { return static_cast<index_t>(elems_.size() / (dim_ + 1)); }

    const double* node(index_t k) const { return nodes_.data() + static_cast<std::size_t>(k) * dim_; }
    const index_t* elem(index_t t) const { return elems_.data() + static_cast<std::size_t>(t) * (dim_ + 1); }
    std::int8_t flag(index_t t, int face) const {
        return bd_flags_[static_cast<std::size_t>(t) * (dim_ + 1) + face];
    }

    Point node_point(index_t k) const {
        const double* p = node(k);
        Point out{0.0, 0.0, 0.0};
        for (int c = 0; c < dim_; ++c) out[c] = p[c];
        return out;
    }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<index_t>& elems() const noexcept { return elems_; }
    const std::vector<std::int8_t>& bd_flags() const noexcept { return bd_flags_; }

private:
    Mesh(int dim, std::vector<double> nodes, std::vector<index_t> elems,
         std::vector<std::int8_t> flags)
        : dim_(dim), nodes_(std::move(nodes)), elems_(std::move(elems)),
          bd_flags_(std::move(flags)) {}

    friend Mesh make_mesh(int, std::vector<double>, std::vector<index_t>,
                          std::vector<std::int8_t>);

    int dim_;
    std::vector<double> nodes_;
    std::vector<index_t> elems_;
    std::vector<std::int8_t> bd_flags_;
};

/// Boundary faces extracted from a mesh: edges in 2-D, triangles in 3-D.
/// Row r of `faces` is the parent element's vertex list with local vertex
/// local_face[r] removed, in the fixed face-vertex order of kTriFaces/kTetFaces.
struct FaceList {
    int dim = 2;                       // face arity: dim vertices per face
    std::vector<index_t> faces;        // M x dim, row-major
    std::vector<index_t> parent_elem;  // M
    std::vector<int> local_face;       // M

    std::size_t size() const noexcept { return parent_elem.size(); }
    const index_t* face(std::size_t r) const { return faces.data() + r * dim; }
};

namespace detail {

inline double elem_signed_measure(int dim, const double* nodes, const index_t* v) {
    if (dim == 2)
        return signed_area(nodes + 2 * static_cast<std::size_t>(v[0]),
                           nodes + 2 * static_cast<std::size_t>(v[1]),
                           nodes + 2 * static_cast<std::size_t>(v[2]));
    return signed_volume(nodes + 3 * static_cast<std::size_t>(v[0]),
                         nodes + 3 * static_cast<std::size_t>(v[1]),
                         nodes + 3 * static_cast<std::size_t>(v[2]),
                         nodes + 3 * static_cast<std::size_t>(v[3]));
}

inline double longest_edge(int dim, const double* nodes, const index_t* v) {
    double best = 0.0;
    for (int a = 0; a <= dim; ++a)
        for (int b = a + 1; b <= dim; ++b) {
            const double* pa = nodes + static_cast<std::size_t>(v[a]) * dim;
            const double* pb = nodes + static_cast<std::size_t>(v[b]) * dim;
            double d2 = 0.0;
            for (int c = 0; c < dim; ++c) d2 += (pa[c] - pb[c]) * (pa[c] - pb[c]);
            best = std::max(best, d2);
        }
    return std::sqrt(best);
}

// Scale-invariant degeneracy test: |measure| < 1e-14 * (longest edge)^dim.
inline bool is_degenerate(int dim, double measure, double edge) {
    return std::abs(measure) < 1e-14 * std::pow(edge, dim);
}

inline void check_dim(int dim) {
    if (dim != 2 && dim != 3)
        throw Error(ErrorCode::invalid_parameter, "mesh dimension must be 2 or 3");
}

// shape, index-range and flag-value checks shared by the mesh constructors
inline void check_arrays(int dim, const std::vector<double>& nodes,
                         const std::vector<index_t>& elems,
                         std::vector<std::int8_t>& bd_flags) {
    check_dim(dim);
    const int nv = dim + 1;
    if (nodes.size() % dim != 0)
        throw Error(ErrorCode::shape_mismatch, "node array length not divisible by dim");
    if (elems.size() % nv != 0)
        throw Error(ErrorCode::shape_mismatch, "elem array length not divisible by dim+1");
    if (bd_flags.empty()) bd_flags.assign(elems.size(), 0);
    if (bd_flags.size() != elems.size())
        throw Error(ErrorCode::shape_mismatch, "bd_flags shape differs from elems");
    const index_t n_nodes = static_cast<index_t>(nodes.size() / dim);
    for (std::size_t k = 0; k < elems.size(); ++k)
        if (elems[k] < 0 || elems[k] >= n_nodes)
            throw Error(ErrorCode::index_out_of_range,
                        "element vertex index " + std::to_string(elems[k]) + " out of range");
    for (std::size_t k = 0; k < bd_flags.size(); ++k)
        if (bd_flags[k] < 0 || bd_flags[k] > 3)
            throw Error(ErrorCode::invalid_flag_value,
                        "boundary flag " + std::to_string(int(bd_flags[k])) + " not in {0,1,2,3}");
}

} // namespace detail

/// Validate raw arrays and build a Mesh. Empty bd_flags means all-zero flags.
inline Mesh make_mesh(int dim, std::vector<double> nodes, std::vector<index_t> elems,
                      std::vector<std::int8_t> bd_flags = {}) {
    detail::check_arrays(dim, nodes, elems, bd_flags);
    const int nv = dim + 1;
    const index_t n_elems = static_cast<index_t>(elems.size() / nv);
    for (index_t t = 0; t < n_elems; ++t) {
        const double m = detail::elem_signed_measure(dim, nodes.data(), elems.data() + std::size_t(t) * nv);
        if (!(m > 0.0))
            throw Error(ErrorCode::non_positive_volume,
                        "element " + std::to_string(t) + " has non-positive signed measure " +
                            std::to_string(m));
    }
    return Mesh(dim, std::move(nodes), std::move(elems), std::move(bd_flags));
}

/// Signed measure of element t: signed area in 2-D, signed volume in 3-D.
inline double signed_measure(const Mesh& mesh, index_t t) {
    if (t < 0 || t >= mesh.num_elems())
        throw Error(ErrorCode::index_out_of_range, "element index out of range");
    return detail::elem_signed_measure(mesh.dim(), mesh.nodes().data(), mesh.elem(t));
}

/// Repair orientation of raw arrays: any element with negative signed measure
/// gets its last two vertices (and the matching flag entries) swapped, then
/// the result is validated through make_mesh. Degenerate elements are rejected.
inline Mesh fix_orientation(int dim, std::vector<double> nodes, std::vector<index_t> elems,
                            std::vector<std::int8_t> bd_flags = {}) {
    detail::check_arrays(dim, nodes, elems, bd_flags);
    const int nv = dim + 1;
    const index_t n_elems = static_cast<index_t>(elems.size() / nv);
    for (index_t t = 0; t < n_elems; ++t) {
        index_t* v = elems.data() + std::size_t(t) * nv;
        const double m = detail::elem_signed_measure(dim, nodes.data(), v);
        const double edge = detail::longest_edge(dim, nodes.data(), v);
        if (detail::is_degenerate(dim, m, edge))
            throw Error(ErrorCode::degenerate_element,
                        "element " + std::to_string(t) + " is degenerate");
        if (m < 0.0) {
            std::swap(v[dim - 1], v[dim]);
            std::int8_t* f = bd_flags.data() + std::size_t(t) * nv;
            std::swap(f[dim - 1], f[dim]);
        }
    }
    return make_mesh(dim, std::move(nodes), std::move(elems), std::move(bd_flags));
}

/// All element faces whose flag equals flag_value, concatenated face-by-face:
/// all first local faces over all elements, then all second ones, and so on.
inline FaceList boundary_faces(const Mesh& mesh, int flag_value) {
    if (flag_value < 1 || flag_value > 3)
        throw Error(ErrorCode::invalid_flag_value, "flag_value must be 1, 2 or 3");
    const int d = mesh.dim();
    FaceList out;
    out.dim = d;
    const index_t nt = mesh.num_elems();
    for (int lf = 0; lf <= d; ++lf) {
        for (index_t t = 0; t < nt; ++t) {
            if (mesh.flag(t, lf) != flag_value) continue;
            const index_t* v = mesh.elem(t);
            if (d == 2) {
                out.faces.push_back(v[kTriFaces[lf][0]]);
                out.faces.push_back(v[kTriFaces[lf][1]]);
            } else {
                out.faces.push_back(v[kTetFaces[lf][0]]);
                out.faces.push_back(v[kTetFaces[lf][1]]);
                out.faces.push_back(v[kTetFaces[lf][2]]);
            }
            out.parent_elem.push_back(t);
            out.local_face.push_back(lf);
        }
    }
    return out;
}

/// Flag every true boundary face (a face belonging to exactly one element)
/// with classifier(face centroid); interior faces are flagged 0. Returns a
/// new mesh; the input is not modified.
inline Mesh set_boundary_flags(const Mesh& mesh,
                               const std::function<int(const Point&)>& classifier) {
    const int d = mesh.dim();
    const int nv = d + 1;
    const index_t nt = mesh.num_elems();

    struct Entry {
        std::array<index_t, 3> key;
        index_t t;
        int lf;
    };
    std::vector<Entry> entries;
    entries.reserve(std::size_t(nt) * nv);
    for (index_t t = 0; t < nt; ++t) {
        const index_t* v = mesh.elem(t);
        for (int lf = 0; lf < nv; ++lf) {
            std::array<index_t, 3> key{0, 0, 0};
            if (d == 2) {
                key = {v[kTriFaces[lf][0]], v[kTriFaces[lf][1]], 0};
                if (key[0] > key[1]) std::swap(key[0], key[1]);
            } else {
                key = {v[kTetFaces[lf][0]], v[kTetFaces[lf][1]], v[kTetFaces[lf][2]]};
                std::sort(key.begin(), key.end());
            }
            entries.push_back({key, t, lf});
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.key < b.key; });

    std::vector<std::int8_t> flags(std::size_t(nt) * nv, 0);
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i + 1;
        while (j < entries.size() && entries[j].key == entries[i].key) ++j;
        if (j - i == 1) {
            const Entry& e = entries[i];
            const index_t* v = mesh.elem(e.t);
            Point centroid{0.0, 0.0, 0.0};
            for (int k = 0; k < d; ++k) {
                const index_t vi = (d == 2) ? v[kTriFaces[e.lf][k]] : v[kTetFaces[e.lf][k]];
                const double* p = mesh.node(vi);
                for (int c = 0; c < d; ++c) centroid[c] += p[c];
            }
            for (int c = 0; c < d; ++c) centroid[c] /= d;
            const int flag = classifier(centroid);
            if (flag < 0 || flag > 3)
                throw Error(ErrorCode::invalid_flag_value,
                            "classifier returned flag " + std::to_string(flag));
            flags[std::size_t(e.t) * nv + e.lf] = static_cast<std::int8_t>(flag);
        }
        i = j;
    }
    return make_mesh(d, mesh.nodes(), mesh.elems(), std::move(flags));
}

enum class MeshShape { unit_square, unit_cube, lshape };

namespace detail {

inline Mesh generate_unit_square(int n) {
    const double h = 1.0 / n;
    std::vector<double> nodes;
    nodes.reserve(std::size_t(n + 1) * (n + 1) * 2);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            nodes.push_back(i * h);
            nodes.push_back(j * h);
        }
    std::vector<index_t> elems;
    elems.reserve(std::size_t(n) * n * 6);
    auto id = [n](int i, int j) { return index_t(j * (n + 1) + i); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const index_t v00 = id(i, j), v10 = id(i + 1, j);
            const index_t v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
            // split along the v00-v11 diagonal
            elems.insert(elems.end(), {v00, v10, v11});
            elems.insert(elems.end(), {v00, v11, v01});
        }
    return make_mesh(2, std::move(nodes), std::move(elems));
}

inline Mesh generate_unit_cube(int n) {
    const double h = 1.0 / n;
    std::vector<double> nodes;
    nodes.reserve(std::size_t(n + 1) * (n + 1) * (n + 1) * 3);
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                nodes.push_back(i * h);
                nodes.push_back(j * h);
                nodes.push_back(k * h);
            }
    auto id = [n](int i, int j, int k) {
        return index_t((k * (n + 1) + j) * (n + 1) + i);
    };
    // Kuhn split: one tetrahedron per monotone vertex path, i.e. per
    // permutation of the three axes. Odd permutations need a vertex swap to
    // restore positive orientation.
    constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    constexpr bool odd[6] = {false, true, true, false, false, true};
    std::vector<index_t> elems;
    elems.reserve(std::size_t(n) * n * n * 24);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < 6; ++p) {
                    int c[3] = {i, j, k};
                    index_t tet[4];
                    tet[0] = id(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++c[perms[p][s]];
                        tet[s + 1] = id(c[0], c[1], c[2]);
                    }
                    if (odd[p]) std::swap(tet[2], tet[3]);
                    elems.insert(elems.end(), {tet[0], tet[1], tet[2], tet[3]});
                }
    return make_mesh(3, std::move(nodes), std::move(elems));
}

inline Mesh generate_lshape(int n) {
    // (-1,1)^2 minus [0,1]x[-1,0]: the full 2n x 2n grid with the cells of
    // the lower-right quadrant removed, same diagonal split as the square.
    const double h = 1.0 / n;
    const int m = 2 * n;
    std::vector<index_t> remap(std::size_t(m + 1) * (m + 1), -1);
    auto gid = [m](int i, int j) { return std::size_t(j) * (m + 1) + i; };
    auto cell_kept = [n](int i, int j) { return !(i >= n && j < n); };

    std::vector<double> nodes;
    index_t next = 0;
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i) {
            const bool used = (i > 0 && j > 0 && cell_kept(i - 1, j - 1)) ||
                              (i < m && j > 0 && cell_kept(i, j - 1)) ||
                              (i > 0 && j < m && cell_kept(i - 1, j)) ||
                              (i < m && j < m && cell_kept(i, j));
            if (!used) continue;
            remap[gid(i, j)] = next++;
            nodes.push_back(-1.0 + i * h);
            nodes.push_back(-1.0 + j * h);
        }
    std::vector<index_t> elems;
    elems.reserve(std::size_t(n) * n * 18);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            if (!cell_kept(i, j)) continue;
            const index_t v00 = remap[gid(i, j)], v10 = remap[gid(i + 1, j)];
            const index_t v01 = remap[gid(i, j + 1)], v11 = remap[gid(i + 1, j + 1)];
            elems.insert(elems.end(), {v00, v10, v11});
            elems.insert(elems.end(), {v00, v11, v01});
        }
    return make_mesh(2, std::move(nodes), std::move(elems));
}

} // namespace detail

/// Canonical test meshes with n subdivisions per unit side; all flags zero.
inline Mesh generate_mesh(MeshShape shape, int n) {
    if (n < 1)
        throw Error(ErrorCode::invalid_parameter, "subdivision count must be >= 1");
    switch (shape) {
    case MeshShape::unit_square: return detail::generate_unit_square(n);
    case MeshShape::unit_cube: return detail::generate_unit_cube(n);
    case MeshShape::lshape: return detail::generate_lshape(n);
    }
    throw Error(ErrorCode::invalid_parameter, "unknown mesh shape");
}

} // namespace femlite
