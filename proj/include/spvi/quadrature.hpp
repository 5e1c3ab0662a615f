#pragma once

#include <vector>

namespace spvi {

/// Quadrature rule on the reference triangle, stored in barycentric
/// coordinates. Weights are normalized to sum to one, so an integral over a
/// physical triangle is  area * sum_i w_i * f(x_i).
struct QuadratureRule {
    struct Point {
        double l0, l1, l2;  // barycentric coordinates
        double w;           // weight w.r.t. the normalized reference measure
    };
    std::vector<Point> points;
    int exactness = 0;  // polynomial degree integrated exactly

    /// 7-point rule, exact for polynomials up to degree 5.
    static const QuadratureRule& triangle_degree5();
    /// Edge-midpoint rule (3 points), exact up to degree 2.
    static const QuadratureRule& triangle_midpoint();
    /// Centroid rule, exact up to degree 1.
    static const QuadratureRule& triangle_centroid();
};

/// Gauss rule on the reference edge [0,1]; weights sum to one.
struct EdgeQuadrature {
    struct Point {
        double t;
        double w;
    };
    std::vector<Point> points;
    int exactness = 0;

    /// 4-point Gauss-Legendre rule, exact up to degree 7.
    static const EdgeQuadrature& gauss4();
};

}  // namespace spvi
