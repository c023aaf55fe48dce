// quadrature.hpp: barycentric quadrature rules on simplices.
//
// A rule stores barycentric sample points and weights that sum to 1; the
// integral approximation is |tau| * sum_q w_q f(x_q) with x_q the Cartesian
// image of the barycentric point. `order` is the largest polynomial degree
// integrated exactly. No face-midpoint rule is offered in 3-D (none of
// order 2 exists); tet4 is the 3-D order-2 rule.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "femlite/error.hpp"
#include "femlite/mesh.hpp"

namespace femlite {

struct QuadRule {
    int dim = 1;   // simplex dimension
    int order = 1; // polynomial exactness degree
    std::vector<double> points;  // size() x (dim+1) barycentric coordinates
    std::vector<double> weights; // size(), sums to 1

    std::size_t size() const noexcept { return weights.size(); }
    const double* point(std::size_t q) const { return points.data() + q * (dim + 1); }
};

enum class RuleName { center, vertex, midpoint_edges, tet4, simpson };

inline QuadRule rule(int dim, RuleName name) {
    QuadRule r;
    r.dim = dim;
    const int nv = dim + 1;
    switch (name) {
    case RuleName::center: {
        if (dim < 1 || dim > 3) break;
        r.order = 1;
        r.points.assign(nv, 1.0 / nv);
        r.weights = {1.0};
        return r;
    }
    case RuleName::vertex: {
        if (dim < 1 || dim > 3) break;
        r.order = 1;
        r.points.assign(std::size_t(nv) * nv, 0.0);
        for (int q = 0; q < nv; ++q) r.points[std::size_t(q) * nv + q] = 1.0;
        r.weights.assign(nv, 1.0 / nv);
        return r;
    }
    case RuleName::midpoint_edges: {
        if (dim != 2) break;
        r.order = 2;
        r.points = {0.0, 0.5, 0.5,
                    0.5, 0.0, 0.5,
                    0.5, 0.5, 0.0};
        r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return r;
    }
    case RuleName::tet4: {
        if (dim != 3) break;
        r.order = 2;
        const double a = 0.58541019662496845; // (5 + 3*sqrt(5)) / 20
        const double b = 0.13819660112501051; // (5 - sqrt(5)) / 20
        r.points = {a, b, b, b,
                    b, a, b, b,
                    b, b, a, b,
                    b, b, b, a};
        r.weights = {0.25, 0.25, 0.25, 0.25};
        return r;
    }
    case RuleName::simpson: {
        if (dim != 1) break;
        r.order = 3;
        r.points = {1.0, 0.0,
                    0.5, 0.5,
                    0.0, 1.0};
        r.weights = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
        return r;
    }
    }
    throw Error(ErrorCode::unknown_rule,
                "no such rule for simplex dimension " + std::to_string(dim));
}

/// Gauss-Legendre on the reference interval in barycentric form (lambda_1 at
/// the first vertex); n points are exact through degree 2n-1. Tabulated for
/// n <= 5.
inline QuadRule gauss_legendre_1d(int n) {
    // abscissae t in [0,1], ascending, with matching normalized weights
    static const std::vector<double> ts[5] = {
        {0.5},
        {0.21132486540518712, 0.78867513459481288},
        {0.11270166537925831, 0.5, 0.88729833462074169},
        {0.069431844202973714, 0.33000947820757187, 0.66999052179242813,
         0.93056815579702629},
        {0.046910077030668004, 0.23076534494715845, 0.5, 0.76923465505284155,
         0.953089922969332},
    };
    static const std::vector<double> ws[5] = {
        {1.0},
        {0.5, 0.5},
        {0.27777777777777778, 0.44444444444444444, 0.27777777777777778},
        {0.17392742256872693, 0.32607257743127307, 0.32607257743127307,
         0.17392742256872693},
        {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
         0.23931433524968324, 0.11846344252809454},
    };
    if (n < 1 || n > 5)
        throw Error(ErrorCode::unknown_rule,
                    "Gauss rule tabulated for 1..5 points, got " + std::to_string(n));
    QuadRule r;
    r.dim = 1;
    r.order = 2 * n - 1;
    r.weights = ws[n - 1];
    for (double t : ts[n - 1]) {
        r.points.push_back(1.0 - t);
        r.points.push_back(t);
    }
    return r;
}

namespace detail {

inline double unsigned_simplex_measure(int dim, std::span<const double> vertices) {
    const double* v = vertices.data();
    if (dim == 1) return std::abs(v[1] - v[0]);
    if (dim == 2) return std::abs(signed_area(v, v + 2, v + 4));
    if (vertices.size() < 12)
        throw Error(ErrorCode::shape_mismatch, "expected 4 x 3 vertex array");
    return std::abs(signed_volume(v, v + 3, v + 6, v + 9));
}

} // namespace detail

/// I(f) ~ sum_q w_q f(sum_k lambda_qk x_k) * |tau|. `vertices` holds the
/// (dim+1) simplex vertices, row-major, dim coordinates each.
template <class F>
double integrate(const QuadRule& r, std::span<const double> vertices, F&& f) {
    const int d = r.dim;
    if (static_cast<int>(vertices.size()) != (d + 1) * d)
        throw Error(ErrorCode::shape_mismatch, "integrate: wrong vertex array size");
    const double measure = detail::unsigned_simplex_measure(d, vertices);
    if (measure == 0.0)
        throw Error(ErrorCode::degenerate_element, "integrate: degenerate simplex");
    double acc = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) {
        const double* lambda = r.point(q);
        Point x{0.0, 0.0, 0.0};
        for (int k = 0; k <= d; ++k)
            for (int c = 0; c < d; ++c) x[c] += lambda[k] * vertices[std::size_t(k) * d + c];
        acc += r.weights[q] * f(x);
    }
    return acc * measure;
}

/// (b-a)/6 * (f(a) + 4 f((a+b)/2) + f(b))
template <class F>
double simpson_interval(double a, double b, F&& f) {
    if (!(a < b))
        throw Error(ErrorCode::invalid_parameter, "simpson_interval requires a < b");
    return (b - a) * (1.0 / 6.0) * (f(a) + 4.0 * f((a + b) / 2.0) + f(b));
}

} // namespace femlite
