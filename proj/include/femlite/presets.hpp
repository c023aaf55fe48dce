// presets.hpp: manufactured-solution problem presets with exact solutions,
// plus the boundary classifiers that flag generated meshes for each boundary
// mode. Every preset carries consistent (f, g_D, g_N, exact, grad_exact); a
// finite-difference self-check validates -Lap u = f.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "femlite/error.hpp"
#include "femlite/mesh.hpp"
#include "femlite/system.hpp"

namespace femlite {

enum class BoundaryKind { dirichlet, mixed, pure_neumann };

struct ProblemPreset {
    std::string name;
    int dim = 2;
    ScalarField f;
    ScalarField exact;
    ScalarField g_dirichlet;
    ScalarField g_neumann;
    VectorField grad_exact;
    BoundaryKind default_bc = BoundaryKind::dirichlet;
};

/// Face classifier for generated meshes: all-Dirichlet, all-Neumann, or
/// Neumann on the bottom side (centroid y below tolerance) and Dirichlet
/// elsewhere. Geometric tolerance 1e-10 absolute; generated meshes have
/// exact binary-fraction coordinates.
inline std::function<int(const Point&)> boundary_classifier(BoundaryKind kind) {
    constexpr double tol = 1e-10;
    switch (kind) {
    case BoundaryKind::dirichlet: return [](const Point&) { return 1; };
    case BoundaryKind::pure_neumann: return [](const Point&) { return 2; };
    case BoundaryKind::mixed:
        return [tol](const Point& p) { return std::abs(p[1]) < tol ? 2 : 1; };
    }
    throw Error(ErrorCode::invalid_parameter, "unknown boundary kind");
}

inline Mesh flag_boundary(const Mesh& mesh, BoundaryKind kind) {
    return set_boundary_flags(mesh, boundary_classifier(kind));
}

inline ProblemPreset make_preset(const std::string& name, int dim) {
    using std::numbers::pi;
    ProblemPreset p;
    p.name = name;
    p.dim = dim;

    if (name == "sinsin" || name == "mixed") {
        if (dim != 2)
            throw Error(ErrorCode::invalid_parameter, "preset '" + name + "' is 2-D");
        p.exact = [](const Point& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
        p.f = [](const Point& x) {
            return 2.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
        };
        p.grad_exact = [](const Point& x) {
            return Point{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                         pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), 0.0};
        };
        p.g_dirichlet = p.exact;
        // outward normal derivative on the bottom side y = 0
        p.g_neumann = [](const Point& x) {
            return -pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
        };
        p.default_bc = (name == "mixed") ? BoundaryKind::mixed : BoundaryKind::dirichlet;
        return p;
    }
    if (name == "sinsinsin") {
        if (dim != 3)
            throw Error(ErrorCode::invalid_parameter, "preset 'sinsinsin' is 3-D");
        p.exact = [](const Point& x) {
            return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]);
        };
        p.f = [](const Point& x) {
            return 3.0 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]) *
                   std::sin(pi * x[2]);
        };
        p.grad_exact = [](const Point& x) {
            return Point{pi * std::cos(pi * x[0]) * std::sin(pi * x[1]) * std::sin(pi * x[2]),
                         pi * std::sin(pi * x[0]) * std::cos(pi * x[1]) * std::sin(pi * x[2]),
                         pi * std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::cos(pi * x[2])};
        };
        p.g_dirichlet = p.exact;
        p.default_bc = BoundaryKind::dirichlet;
        return p;
    }
    if (name == "linear") {
        p.exact = [dim](const Point& x) {
            return x[0] + x[1] + (dim == 3 ? x[2] : 0.0);
        };
        p.f = [](const Point&) { return 0.0; };
        p.grad_exact = [dim](const Point&) {
            return Point{1.0, 1.0, dim == 3 ? 1.0 : 0.0};
        };
        p.g_dirichlet = p.exact;
        p.g_neumann = [](const Point&) { return -1.0; }; // bottom side, n = (0,-1)
        p.default_bc = BoundaryKind::dirichlet;
        return p;
    }
    if (name == "neumann-pure") {
        if (dim != 2)
            throw Error(ErrorCode::invalid_parameter, "preset 'neumann-pure' is 2-D");
        p.exact = [](const Point& x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]); };
        p.f = [](const Point& x) {
            return 2.0 * pi * pi * std::cos(pi * x[0]) * std::cos(pi * x[1]);
        };
        p.grad_exact = [](const Point& x) {
            return Point{-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]),
                         -pi * std::cos(pi * x[0]) * std::sin(pi * x[1]), 0.0};
        };
        // du/dn vanishes on all four unit-square sides; compatible with f
        p.g_neumann = [](const Point&) { return 0.0; };
        p.default_bc = BoundaryKind::pure_neumann;
        return p;
    }
    if (name == "zero") {
        p.exact = [](const Point&) { return 0.0; };
        p.f = [](const Point&) { return 0.0; };
        p.grad_exact = [](const Point&) { return Point{0.0, 0.0, 0.0}; };
        p.g_dirichlet = p.exact;
        p.g_neumann = [](const Point&) { return 0.0; };
        p.default_bc = BoundaryKind::dirichlet;
        return p;
    }
    throw Error(ErrorCode::invalid_parameter, "unknown problem preset '" + name + "'");
}

inline PoissonProblem to_problem(const ProblemPreset& preset, BoundaryKind bc) {
    PoissonProblem prob;
    prob.f = preset.f;
    if (bc != BoundaryKind::pure_neumann) {
        if (!preset.g_dirichlet)
            throw Error(ErrorCode::invalid_parameter,
                        "preset '" + preset.name + "' carries no Dirichlet data");
        prob.g_dirichlet = preset.g_dirichlet;
    }
    if (bc != BoundaryKind::dirichlet) {
        if (!preset.g_neumann)
            throw Error(ErrorCode::invalid_parameter,
                        "preset '" + preset.name + "' carries no Neumann data");
        prob.g_neumann = preset.g_neumann;
    }
    return prob;
}

/// Check -Lap(exact) = f at 10 pseudo-random interior points with
/// second-order central differences (step 1e-5, tolerance 1e-4).
inline void check_preset(const ProblemPreset& preset) {
    constexpr double h = 1e-5;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coord(0.05, 0.95);
    for (int trial = 0; trial < 10; ++trial) {
        Point x{0.0, 0.0, 0.0};
        for (int c = 0; c < preset.dim; ++c) x[c] = coord(rng);
        double lap = 0.0;
        for (int c = 0; c < preset.dim; ++c) {
            Point xp = x, xm = x;
            xp[c] += h;
            xm[c] -= h;
            lap += (preset.exact(xp) - 2.0 * preset.exact(x) + preset.exact(xm)) / (h * h);
        }
        const double f = preset.f(x);
        if (std::abs(-lap - f) > 1e-4 * std::max(1.0, std::abs(f)))
            throw Error(ErrorCode::invalid_parameter,
                        "preset '" + preset.name + "' fails -Lap u = f self-check (got " +
                            std::to_string(-lap) + ", expected " + std::to_string(f) + ")");
    }
}

} // namespace femlite
