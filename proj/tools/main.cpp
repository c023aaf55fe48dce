// femlite command-line tool: solve Poisson problems on simplicial meshes,
// run convergence studies, benchmark assembly strategies, inspect meshes and
// quadrature rules.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "femlite/femlite.hpp"

namespace {

using namespace femlite;

std::string fmt_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MeshShape parse_shape(const std::string& name) {
    if (name == "unit_square") return MeshShape::unit_square;
    if (name == "unit_cube") return MeshShape::unit_cube;
    if (name == "lshape") return MeshShape::lshape;
    throw Error(ErrorCode::invalid_parameter, "unknown mesh shape '" + name + "'");
}

BoundaryKind parse_bc(const std::string& name) {
    if (name == "dirichlet") return BoundaryKind::dirichlet;
    if (name == "mixed") return BoundaryKind::mixed;
    if (name == "pure-neumann") return BoundaryKind::pure_neumann;
    throw Error(ErrorCode::invalid_parameter, "unknown boundary kind '" + name + "'");
}

AssemblyStrategy parse_strategy(const std::string& name) {
    if (name == "dense_oracle") return AssemblyStrategy::dense_oracle;
    if (name == "triplet_loop") return AssemblyStrategy::triplet_loop;
    if (name == "blockwise") return AssemblyStrategy::blockwise;
    throw Error(ErrorCode::invalid_parameter, "unknown assembly strategy '" + name + "'");
}

// "unit_square:8" -> shape + subdivisions
Mesh mesh_from_gen(const std::string& gen) {
    const auto pos = gen.find(':');
    if (pos == std::string::npos)
        throw Error(ErrorCode::invalid_parameter,
                    "--gen expects shape:n, e.g. unit_square:8");
    const MeshShape shape = parse_shape(gen.substr(0, pos));
    int n = 0;
    try {
        n = std::stoi(gen.substr(pos + 1));
    } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_parameter, "bad subdivision count in --gen");
    }
    return generate_mesh(shape, n);
}

struct MeshArgs {
    std::string gen;
    std::string file;
    std::string bc;
};

void add_mesh_options(CLI::App* cmd, MeshArgs& args, bool bc_option = true) {
    auto* g = cmd->add_option("--gen", args.gen, "generated mesh, shape:n (unit_square, unit_cube, lshape)");
    auto* m = cmd->add_option("--mesh", args.file, "mesh file path");
    g->excludes(m);
    if (bc_option)
        cmd->add_option("--bc", args.bc, "boundary kind: dirichlet, mixed, pure-neumann");
}

struct SolverArgs {
    double tol = 1e-10;
    index_t max_iter = 0;
    std::string precond = "auto";
    std::string method = "cg";
    int pin_node = 0; // one-based; 0 means default (first node)
};

void add_solver_options(CLI::App* cmd, SolverArgs& args) {
    cmd->add_option("--tol", args.tol, "relative residual tolerance (default 1e-10)");
    cmd->add_option("--max-iter", args.max_iter, "iteration cap (default 10*N)");
    cmd->add_option("--precond", args.precond, "preconditioner: auto, jacobi, none");
    cmd->add_option("--method", args.method, "reduced solve: cg or dense");
    cmd->add_option("--pin-node", args.pin_node, "pure-Neumann pinned node (one-based)")
        ->check(CLI::PositiveNumber);
}

SolveOptions to_options(const SolverArgs& args) {
    SolveOptions opts;
    opts.rel_tol = args.tol;
    opts.max_iter = args.max_iter;
    if (args.precond == "auto")
        opts.preconditioner = Preconditioner::auto_select;
    else if (args.precond == "jacobi")
        opts.preconditioner = Preconditioner::jacobi;
    else if (args.precond == "none")
        opts.preconditioner = Preconditioner::none;
    else
        throw Error(ErrorCode::invalid_parameter, "unknown preconditioner '" + args.precond + "'");
    if (args.method == "cg")
        opts.method = SolveMethod::cg;
    else if (args.method == "dense")
        opts.method = SolveMethod::dense_direct;
    else
        throw Error(ErrorCode::invalid_parameter, "unknown method '" + args.method + "'");
    if (args.pin_node > 0) opts.pin_node = args.pin_node - 1;
    return opts;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    return out;
}

void write_solution_csv(const Mesh& mesh, const std::vector<double>& u, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "# femlite solution csv v1\n";
    out << (mesh.dim() == 2 ? "node,x,y,value\n" : "node,x,y,z,value\n");
    for (index_t k = 0; k < mesh.num_nodes(); ++k) {
        const double* p = mesh.node(k);
        out << (k + 1);
        for (int c = 0; c < mesh.dim(); ++c) out << ',' << fmt_real(p[c]);
        out << ',' << fmt_real(u[static_cast<std::size_t>(k)]) << '\n';
    }
    if (!out) throw Error(ErrorCode::io_error, "write to '" + path + "' failed");
}

int run_solve(const MeshArgs& margs, const std::string& problem_name, const SolverArgs& sargs,
              const std::string& out_csv, const std::string& matrix_path) {
    Mesh mesh = margs.gen.empty() ? read_mesh(margs.file) : mesh_from_gen(margs.gen);
    const ProblemPreset preset = make_preset(problem_name, mesh.dim());
    check_preset(preset);

    std::optional<BoundaryKind> bc;
    if (!margs.bc.empty())
        bc = parse_bc(margs.bc);
    else if (!margs.gen.empty())
        bc = preset.default_bc;
    if (bc) mesh = flag_boundary(mesh, *bc);

    PoissonProblem problem;
    if (bc) {
        problem = to_problem(preset, *bc);
    } else {
        // mesh-file flags decide the paths; hand over whatever the preset has
        problem.f = preset.f;
        problem.g_dirichlet = preset.g_dirichlet;
        problem.g_neumann = preset.g_neumann;
    }

    const Solution sol = solve_poisson(mesh, problem, to_options(sargs));
    std::cout << "nodes      " << mesh.num_nodes() << "\n"
              << "elements   " << mesh.num_elems() << "\n"
              << "iterations " << sol.iterations << "\n"
              << "residual   " << fmt_real(sol.final_relres) << "\n";
    if (preset.exact) {
        ScalarField exact = preset.exact;
        if (sol.partition.dirichlet_faces.size() == 0) {
            // pure-Neumann: compare against the exact field under the same
            // zero-average constraint the solution satisfies
            std::vector<double> samples(static_cast<std::size_t>(mesh.num_nodes()));
            for (index_t k = 0; k < mesh.num_nodes(); ++k)
                samples[static_cast<std::size_t>(k)] = preset.exact(mesh.node_point(k));
            const std::vector<double> shifted = zero_average_shift(mesh, samples);
            const double c = samples[0] - shifted[0];
            exact = [base = preset.exact, c](const Point& x) { return base(x) - c; };
        }
        const ErrorNorms err = error_norms(mesh, sol.u, exact, preset.grad_exact);
        std::cout << "l2_error   " << fmt_real(err.l2) << "\n"
                  << "h1_error   " << fmt_real(err.h1_semi) << "\n";
    }
    if (!out_csv.empty()) {
        write_solution_csv(mesh, sol.u, out_csv);
        std::cout << "solution   " << out_csv << "\n";
    }
    if (!matrix_path.empty()) {
        write_matrix_market(assemble_blockwise(mesh), matrix_path);
        std::cout << "matrix     " << matrix_path << "\n";
    }
    return 0;
}

std::string rate_str(double rate) {
    if (std::isnan(rate)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", rate);
    return buf;
}

int run_convergence(const MeshArgs& margs, const std::string& problem_name,
                    const std::vector<int>& levels, const SolverArgs& sargs,
                    const std::string& csv_path) {
    if (margs.gen.find(':') != std::string::npos)
        throw Error(ErrorCode::invalid_parameter,
                    "convergence takes --gen shape (no :n); sizes come from --levels");
    const MeshShape shape = parse_shape(margs.gen.empty() ? "unit_square" : margs.gen);
    const int dim = (shape == MeshShape::unit_cube) ? 3 : 2;
    const ProblemPreset preset = make_preset(problem_name, dim);
    check_preset(preset);
    const BoundaryKind bc = margs.bc.empty() ? preset.default_bc : parse_bc(margs.bc);

    const std::vector<ConvergenceRow> rows =
        femlite::run_convergence(preset, bc, shape, levels, to_options(sargs));

    std::cout << std::left << std::setw(7) << "level" << std::setw(12) << "h" << std::setw(9)
              << "nodes" << std::setw(9) << "elems" << std::setw(13) << "l2_error"
              << std::setw(8) << "rate" << std::setw(13) << "h1_error" << std::setw(8)
              << "rate" << std::setw(7) << "iters" << std::setw(13) << "assemble_s"
              << "solve_s\n";
    for (const ConvergenceRow& row : rows) {
        char l2buf[32], h1buf[32], hbuf[32];
        std::snprintf(l2buf, sizeof l2buf, "%.4e", row.l2_error);
        std::snprintf(h1buf, sizeof h1buf, "%.4e", row.h1_error);
        std::snprintf(hbuf, sizeof hbuf, "%.6g", row.h);
        std::cout << std::left << std::setw(7) << row.level << std::setw(12) << hbuf
                  << std::setw(9) << row.nodes << std::setw(9) << row.elems << std::setw(13)
                  << l2buf << std::setw(8) << rate_str(row.l2_rate) << std::setw(13) << h1buf
                  << std::setw(8) << rate_str(row.h1_rate) << std::setw(7) << row.cg_iters
                  << std::setw(13) << std::setprecision(3) << row.assemble_seconds
                  << std::setprecision(3) << row.solve_seconds << "\n";
    }

    if (!csv_path.empty()) {
        // timings stay out of the CSV so identical inputs give identical bytes
        std::ofstream out = open_output(csv_path);
        out << "# femlite convergence csv v1\n";
        out << "level,h,nodes,elems,l2_error,h1_error,l2_rate,h1_rate,cg_iters\n";
        for (const ConvergenceRow& row : rows) {
            out << row.level << ',' << fmt_real(row.h) << ',' << row.nodes << ',' << row.elems
                << ',' << fmt_real(row.l2_error) << ',' << fmt_real(row.h1_error) << ','
                << (std::isnan(row.l2_rate) ? "" : fmt_real(row.l2_rate)) << ','
                << (std::isnan(row.h1_rate) ? "" : fmt_real(row.h1_rate)) << ',' << row.cg_iters
                << '\n';
        }
        if (!out) throw Error(ErrorCode::io_error, "write to '" + csv_path + "' failed");
        std::cout << "csv " << csv_path << "\n";
    }
    return 0;
}

int run_bench(int dim, const std::vector<std::string>& strategy_names,
              const std::vector<int>& sizes, int repeats, const std::string& csv_path) {
    std::vector<AssemblyStrategy> strategies;
    for (const std::string& name : strategy_names) strategies.push_back(parse_strategy(name));
    if (strategies.empty())
        strategies = {AssemblyStrategy::blockwise, AssemblyStrategy::triplet_loop};

    const std::vector<BenchRow> rows = femlite::run_bench(dim, strategies, sizes, repeats);
    const std::vector<BenchFit> fits = fit_bench(rows);

    std::cout << std::left << std::setw(14) << "strategy" << std::setw(7) << "level"
              << std::setw(9) << "nodes" << std::setw(9) << "elems" << std::setw(10) << "nnz"
              << std::setw(12) << "mem_touch" << "seconds\n";
    for (const BenchRow& row : rows) {
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.6e", row.seconds);
        std::cout << std::left << std::setw(14) << strategy_name(row.strategy) << std::setw(7)
                  << row.level << std::setw(9) << row.nodes << std::setw(9) << row.elems
                  << std::setw(10) << row.nnz << std::setw(12) << row.mem_touch << tbuf << "\n";
    }
    for (const BenchFit& fit : fits) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-14s time exponent %.3f, mem-touch exponent %.3f",
                      strategy_name(fit.strategy), fit.time_exponent, fit.mem_exponent);
        std::cout << buf << "\n";
    }

    if (!csv_path.empty()) {
        std::ofstream out = open_output(csv_path);
        out << "# femlite bench csv v1\n";
        out << "strategy,level,nodes,elems,nnz,mem_touch,seconds\n";
        for (const BenchRow& row : rows)
            out << strategy_name(row.strategy) << ',' << row.level << ',' << row.nodes << ','
                << row.elems << ',' << row.nnz << ',' << row.mem_touch << ','
                << fmt_real(row.seconds) << '\n';
        if (!out) throw Error(ErrorCode::io_error, "write to '" + csv_path + "' failed");
        std::cout << "csv " << csv_path << "\n";
    }
    return 0;
}

void print_rule(const QuadRule& r, const std::string& name) {
    std::cout << name << ": dim " << r.dim << ", order " << r.order << ", " << r.size()
              << " points\n";
    double wsum = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        std::cout << "  lambda = (";
        for (int k = 0; k <= r.dim; ++k)
            std::cout << (k ? ", " : "") << fmt_real(r.point(q)[k]);
        std::cout << "), w = " << fmt_real(r.weights[q]) << "\n";
        wsum += r.weights[q];
    }
    std::cout << "  weight sum = " << fmt_real(wsum) << "\n";
}

int run_mesh_info(const MeshArgs& margs, bool show_rules) {
    if (show_rules) {
        for (int d : {1, 2, 3}) {
            print_rule(rule(d, RuleName::center), "center (dim " + std::to_string(d) + ")");
            print_rule(rule(d, RuleName::vertex), "vertex (dim " + std::to_string(d) + ")");
        }
        print_rule(rule(2, RuleName::midpoint_edges), "midpoint_edges");
        print_rule(rule(3, RuleName::tet4), "tet4");
        print_rule(rule(1, RuleName::simpson), "simpson");
        for (int n = 1; n <= 5; ++n)
            print_rule(gauss_legendre_1d(n), "gauss_legendre_1d(" + std::to_string(n) + ")");
        if (margs.gen.empty() && margs.file.empty()) return 0;
    }
    if (margs.gen.empty() && margs.file.empty())
        throw Error(ErrorCode::invalid_parameter, "mesh-info needs --gen, --mesh or --rules");
    const Mesh mesh = margs.gen.empty() ? read_mesh(margs.file) : mesh_from_gen(margs.gen);

    double min_measure = 0.0, max_measure = 0.0, total = 0.0;
    for (index_t t = 0; t < mesh.num_elems(); ++t) {
        const double m = signed_measure(mesh, t);
        if (t == 0) min_measure = max_measure = m;
        min_measure = std::min(min_measure, m);
        max_measure = std::max(max_measure, m);
        total += m;
    }
    // count true boundary faces by flagging a copy of the mesh
    const Mesh flagged = set_boundary_flags(mesh, [](const Point&) { return 1; });
    const std::size_t boundary_count = boundary_faces(flagged, 1).size();

    std::cout << "dim              " << mesh.dim() << "\n"
              << "nodes            " << mesh.num_nodes() << "\n"
              << "elements         " << mesh.num_elems() << "\n"
              << "NT/N             " << std::setprecision(6)
              << double(mesh.num_elems()) / double(mesh.num_nodes()) << "\n"
              << "min measure      " << fmt_real(min_measure) << "\n"
              << "max measure      " << fmt_real(max_measure) << "\n"
              << "total measure    " << fmt_real(total) << "\n"
              << "boundary faces   " << boundary_count << "\n";
    for (int flag = 1; flag <= 3; ++flag)
        std::cout << "flagged " << flag << "        " << boundary_faces(mesh, flag).size()
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) try {
    CLI::App app{"femlite: linear finite elements for the Poisson equation on simplicial meshes"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one problem on a mesh");
    MeshArgs solve_mesh;
    SolverArgs solve_solver;
    std::string solve_problem, solve_out, solve_matrix;
    add_mesh_options(solve, solve_mesh);
    solve->add_option("--problem", solve_problem, "problem preset name")->required();
    add_solver_options(solve, solve_solver);
    solve->add_option("--out", solve_out, "solution CSV path");
    solve->add_option("--dump-matrix", solve_matrix, "MatrixMarket path for the stiffness matrix");

    // convergence
    auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
    MeshArgs conv_mesh;
    SolverArgs conv_solver;
    std::string conv_problem, conv_csv;
    std::vector<int> conv_levels{8, 16, 32, 64};
    add_mesh_options(conv, conv_mesh);
    conv->add_option("--problem", conv_problem, "problem preset name")->required();
    conv->add_option("--levels", conv_levels, "subdivision levels (default 8 16 32 64)")
        ->delimiter(',');
    add_solver_options(conv, conv_solver);
    conv->add_option("--csv", conv_csv, "convergence CSV path");

    // bench
    auto* bench = app.add_subcommand("bench", "assembly strategy benchmark");
    int bench_dim = 2, bench_repeats = 5;
    std::vector<std::string> bench_strategies{"blockwise", "triplet_loop"};
    std::vector<int> bench_sizes{16, 32, 64, 128};
    std::string bench_csv;
    bench->add_option("--dim", bench_dim, "mesh dimension, 2 or 3")
        ->check(CLI::IsMember({2, 3}));
    bench->add_option("--strategies", bench_strategies,
                      "strategies: blockwise, triplet_loop, dense_oracle")
        ->delimiter(',');
    bench->add_option("--sizes", bench_sizes, "subdivision levels (default 16 32 64 128)")
        ->delimiter(',');
    bench->add_option("--repeats", bench_repeats, "timing repeats per point (default 5)");
    bench->add_option("--csv", bench_csv, "bench CSV path");

    // mesh-info
    auto* info = app.add_subcommand("mesh-info", "mesh statistics and quadrature tables");
    MeshArgs info_mesh;
    bool info_rules = false;
    add_mesh_options(info, info_mesh, /*bc_option=*/false);
    info->add_flag("--rules", info_rules, "print the quadrature rule tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed())
            return run_solve(solve_mesh, solve_problem, solve_solver, solve_out, solve_matrix);
        if (conv->parsed())
            return run_convergence(conv_mesh, conv_problem, conv_levels, conv_solver, conv_csv);
        if (bench->parsed())
            return run_bench(bench_dim, bench_strategies, bench_sizes, bench_repeats, bench_csv);
        if (info->parsed()) return run_mesh_info(info_mesh, info_rules);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
} catch (...) {
    std::cerr << "error: unknown failure\n";
    return 1;
}
