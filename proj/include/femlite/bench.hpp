// bench.hpp: assembly-strategy scaling benchmark. Wall times are the median
// of `repeats` runs on a monotonic clock; the per-strategy scaling exponent
// comes from a log-log least-squares fit against the node count. A
// deterministic memory-touch proxy (double slots written during assembly) is
// fitted the same way, which exposes the structural O(N^2) of the dense
// oracle independent of timer noise.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "femlite/assembly.hpp"
#include "femlite/error.hpp"
#include "femlite/mesh.hpp"

namespace femlite {

struct BenchRow {
    AssemblyStrategy strategy;
    int level = 0; // subdivisions per unit side
    index_t nodes = 0;
    index_t elems = 0;
    index_t nnz = 0;
    std::size_t mem_touch = 0; // double slots written
    double seconds = 0.0;      // median wall time of one assembly
};

struct BenchFit {
    AssemblyStrategy strategy;
    double time_exponent = 0.0;
    double mem_exponent = 0.0;
};

inline const char* strategy_name(AssemblyStrategy s) {
    switch (s) {
    case AssemblyStrategy::dense_oracle: return "dense_oracle";
    case AssemblyStrategy::triplet_loop: return "triplet_loop";
    case AssemblyStrategy::blockwise: return "blockwise";
    }
    return "?";
}

namespace detail {

inline std::size_t assembly_mem_touch(AssemblyStrategy s, int dim, index_t nodes,
                                      index_t elems, index_t nnz) {
    const std::size_t block = std::size_t(dim + 1) * (dim + 1) * std::size_t(elems);
    if (s == AssemblyStrategy::dense_oracle)
        return std::size_t(nodes) * std::size_t(nodes) + block;
    // triplet arrays (i, j, s) plus the CSC arrays they compress into
    return 3 * block + 2 * std::size_t(nnz) + std::size_t(nodes) + 1;
}

} // namespace detail

/// Assemble every strategy on every size, asserting equal nnz across
/// strategies per size before timing. Keeps freed pages in the allocator for
/// the duration of the process (glibc): otherwise every timed run of a large
/// size re-faults its pages while small sizes recycle heap memory, which
/// biases the fitted exponent upward.
inline std::vector<BenchRow> run_bench(int dim, std::span<const AssemblyStrategy> strategies,
                                       std::span<const int> sizes, int repeats = 5) {
    if (repeats < 1) throw Error(ErrorCode::invalid_parameter, "repeats must be >= 1");
#if defined(__GLIBC__)
    mallopt(M_MMAP_MAX, 0);
    mallopt(M_TRIM_THRESHOLD, -1);
#endif
    const MeshShape shape = (dim == 2) ? MeshShape::unit_square : MeshShape::unit_cube;
    std::vector<BenchRow> rows;
    for (int n : sizes) {
        const Mesh mesh = generate_mesh(shape, n);
        index_t common_nnz = -1;
        for (AssemblyStrategy s : strategies) {
            const CscMatrix a = assemble(mesh, s); // warm-up + nnz check
            if (common_nnz < 0) common_nnz = a.nnz();
            if (a.nnz() != common_nnz)
                throw Error(ErrorCode::invalid_parameter,
                            std::string("strategy ") + strategy_name(s) +
                                " produced a different nnz at n = " + std::to_string(n));
            std::vector<double> times(static_cast<std::size_t>(repeats));
            for (int r = 0; r < repeats; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                const CscMatrix timed = assemble(mesh, s);
                times[static_cast<std::size_t>(r)] =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (timed.nnz() != common_nnz)
                    throw Error(ErrorCode::invalid_parameter, "nnz changed between runs");
            }
            std::sort(times.begin(), times.end());
            BenchRow row;
            row.strategy = s;
            row.level = n;
            row.nodes = mesh.num_nodes();
            row.elems = mesh.num_elems();
            row.nnz = common_nnz;
            row.mem_touch =
                detail::assembly_mem_touch(s, dim, row.nodes, row.elems, common_nnz);
            row.seconds = times[times.size() / 2];
            rows.push_back(row);
        }
    }
    return rows;
}

/// Least-squares slope of log(y) against log(nodes), per strategy.
inline std::vector<BenchFit> fit_bench(std::span<const BenchRow> rows) {
    std::vector<BenchFit> fits;
    std::vector<AssemblyStrategy> seen;
    for (const BenchRow& row : rows)
        if (std::find(seen.begin(), seen.end(), row.strategy) == seen.end())
            seen.push_back(row.strategy);
    for (AssemblyStrategy s : seen) {
        double sx = 0, sy_t = 0, sy_m = 0, sxx = 0, sxy_t = 0, sxy_m = 0;
        int count = 0;
        for (const BenchRow& row : rows) {
            if (row.strategy != s) continue;
            const double x = std::log(static_cast<double>(row.nodes));
            const double yt = std::log(std::max(row.seconds, 1e-9));
            const double ym = std::log(static_cast<double>(row.mem_touch));
            sx += x;
            sy_t += yt;
            sy_m += ym;
            sxx += x * x;
            sxy_t += x * yt;
            sxy_m += x * ym;
            ++count;
        }
        if (count < 2)
            throw Error(ErrorCode::invalid_parameter, "need at least two sizes to fit");
        const double denom = count * sxx - sx * sx;
        fits.push_back({s, (count * sxy_t - sx * sy_t) / denom,
                        (count * sxy_m - sx * sy_m) / denom});
    }
    return fits;
}

} // namespace femlite
