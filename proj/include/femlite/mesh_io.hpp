// mesh_io.hpp: line-oriented text format for meshes.
//
//   dim N NT
//   N lines: d node coordinates
//   NT lines: d+1 one-based vertex indices
//   NT lines: d+1 boundary flags (optional; omitted means all zero)
//
// `#` starts a comment that runs to end of line. Coordinates are written with
// 17 significant digits so a write/read round trip is lossless.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "femlite/error.hpp"
#include "femlite/mesh.hpp"

namespace femlite {

namespace detail {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty line with comments stripped; false at EOF.
    bool next(std::istringstream& out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (const auto pos = line.find('#'); pos != std::string::npos)
                line.erase(pos);
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            out = std::istringstream(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::parse_error,
                    "mesh parse error at line " + std::to_string(line_no_) + ": " + what);
    }

    int line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    int line_no_ = 0;
};

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline Mesh read_mesh(std::istream& in) {
    detail::LineReader reader(in);
    std::istringstream line;

    if (!reader.next(line)) reader.fail("missing header line");
    int dim = 0;
    long long n_nodes = 0, n_elems = 0;
    if (!(line >> dim >> n_nodes >> n_elems)) reader.fail("expected 'dim N NT'");
    if (dim != 2 && dim != 3) reader.fail("dim must be 2 or 3");
    if (n_nodes < 0 || n_elems < 0) reader.fail("negative count");

    std::vector<double> nodes;
    nodes.reserve(std::size_t(n_nodes) * dim);
    for (long long k = 0; k < n_nodes; ++k) {
        if (!reader.next(line)) reader.fail("unexpected end of file in node section");
        for (int c = 0; c < dim; ++c) {
            double x;
            if (!(line >> x)) reader.fail("expected " + std::to_string(dim) + " coordinates");
            nodes.push_back(x);
        }
    }

    const int nv = dim + 1;
    std::vector<index_t> elems;
    elems.reserve(std::size_t(n_elems) * nv);
    for (long long t = 0; t < n_elems; ++t) {
        if (!reader.next(line)) reader.fail("unexpected end of file in element section");
        for (int c = 0; c < nv; ++c) {
            long long v;
            if (!(line >> v)) reader.fail("expected " + std::to_string(nv) + " vertex indices");
            if (v < 1 || v > n_nodes)
                reader.fail("vertex index " + std::to_string(v) + " outside [1, " +
                            std::to_string(n_nodes) + "]");
            elems.push_back(static_cast<index_t>(v - 1));
        }
    }

    std::vector<std::int8_t> flags;
    if (reader.next(line)) {
        flags.reserve(std::size_t(n_elems) * nv);
        for (long long t = 0; t < n_elems; ++t) {
            if (t > 0 && !reader.next(line)) reader.fail("unexpected end of file in flag section");
            for (int c = 0; c < nv; ++c) {
                int f;
                if (!(line >> f)) reader.fail("expected " + std::to_string(nv) + " flags");
                if (f < 0 || f > 3) reader.fail("flag " + std::to_string(f) + " not in {0,1,2,3}");
                flags.push_back(static_cast<std::int8_t>(f));
            }
        }
        if (reader.next(line)) reader.fail("trailing content after flag section");
    }

    return make_mesh(dim, std::move(nodes), std::move(elems), std::move(flags));
}

inline Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

inline void write_mesh(const Mesh& mesh, std::ostream& out) {
    const int d = mesh.dim();
    out << d << ' ' << mesh.num_nodes() << ' ' << mesh.num_elems() << '\n';
    for (index_t k = 0; k < mesh.num_nodes(); ++k) {
        const double* p = mesh.node(k);
        for (int c = 0; c < d; ++c) out << (c ? " " : "") << detail::format_real(p[c]);
        out << '\n';
    }
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        const index_t* v = mesh.elem(t);
        for (int c = 0; c <= d; ++c) out << (c ? " " : "") << (v[c] + 1);
        out << '\n';
    }
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        for (int c = 0; c <= d; ++c) out << (c ? " " : "") << int(mesh.flag(t, c));
        out << '\n';
    }
}

inline void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    write_mesh(mesh, out);
    if (!out) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

} // namespace femlite
