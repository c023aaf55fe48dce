// convergence.hpp: manufactured-solution convergence studies. One solve per
// refinement level; rates are log2(e_{2h} / e_h) against the previous level.
// For pure-Neumann runs the exact field is shifted by the discrete average
// of its nodal samples so both sides satisfy the same zero-average
// constraint before the L2 error is measured.

#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "femlite/assembly.hpp"
#include "femlite/mesh.hpp"
#include "femlite/presets.hpp"
#include "femlite/solver.hpp"
#include "femlite/system.hpp"

namespace femlite {

struct ConvergenceRow {
    int level = 0; // subdivisions per unit side
    double h = 0.0;
    index_t nodes = 0;
    index_t elems = 0;
    double l2_error = 0.0;
    double h1_error = 0.0;
    double l2_rate = std::numeric_limits<double>::quiet_NaN(); // NaN on the first row
    double h1_rate = std::numeric_limits<double>::quiet_NaN();
    index_t cg_iters = 0;
    double assemble_seconds = 0.0;
    double solve_seconds = 0.0;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace detail

inline std::vector<ConvergenceRow> run_convergence(const ProblemPreset& preset,
                                                   BoundaryKind bc, MeshShape shape,
                                                   std::span<const int> levels,
                                                   const SolveOptions& opts = {}) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(levels.size());
    const PoissonProblem problem = to_problem(preset, bc);

    for (int n : levels) {
        const Mesh mesh = flag_boundary(generate_mesh(shape, n), bc);

        ConvergenceRow row;
        row.level = n;
        row.h = 1.0 / n;
        row.nodes = mesh.num_nodes();
        row.elems = mesh.num_elems();

        auto t0 = std::chrono::steady_clock::now();
        const CscMatrix a = assemble_blockwise(mesh); // timed separately from the solve
        row.assemble_seconds = detail::seconds_since(t0);
        (void)a;

        t0 = std::chrono::steady_clock::now();
        const Solution sol = solve_poisson(mesh, problem, opts);
        row.solve_seconds = detail::seconds_since(t0);
        row.cg_iters = sol.iterations;

        ScalarField exact = preset.exact;
        if (bc == BoundaryKind::pure_neumann) {
            // shift by the discrete average of the sampled exact solution
            std::vector<double> samples(static_cast<std::size_t>(mesh.num_nodes()));
            for (index_t k = 0; k < mesh.num_nodes(); ++k)
                samples[static_cast<std::size_t>(k)] = preset.exact(mesh.node_point(k));
            const std::vector<double> shifted = zero_average_shift(mesh, samples);
            const double c = samples[0] - shifted[0];
            exact = [base = preset.exact, c](const Point& x) { return base(x) - c; };
        }
        const ErrorNorms err = error_norms(mesh, sol.u, exact, preset.grad_exact);
        row.l2_error = err.l2;
        row.h1_error = err.h1_semi;

        if (!rows.empty()) {
            const ConvergenceRow& prev = rows.back();
            const double scale = std::log2(row.h == 0.0 ? 2.0 : prev.h / row.h);
            row.l2_rate = std::log2(prev.l2_error / row.l2_error) / scale;
            row.h1_rate = std::log2(prev.h1_error / row.h1_error) / scale;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace femlite
