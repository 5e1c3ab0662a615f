#include "spvi/quadrature.hpp"

#include <cmath>

namespace spvi {

const QuadratureRule& QuadratureRule::triangle_degree5() {
    static const QuadratureRule rule = [] {
        // Radon's 7-point rule. Two orbits of three points plus the centroid.
        const double s = std::sqrt(15.0);
        const double a1 = (6.0 - s) / 21.0;  // orbit near the vertices
        const double a2 = (6.0 + s) / 21.0;  // orbit near the edge midpoints
        const double w1 = (155.0 - s) / 1200.0;
        const double w2 = (155.0 + s) / 1200.0;
        QuadratureRule r;
        r.exactness = 5;
        r.points = {
            {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
            {1.0 - 2.0 * a1, a1, a1, w1},
            {a1, 1.0 - 2.0 * a1, a1, w1},
            {a1, a1, 1.0 - 2.0 * a1, w1},
            {1.0 - 2.0 * a2, a2, a2, w2},
            {a2, 1.0 - 2.0 * a2, a2, w2},
            {a2, a2, 1.0 - 2.0 * a2, w2},
        };
        return r;
    }();
    return rule;
}

const QuadratureRule& QuadratureRule::triangle_midpoint() {
    static const QuadratureRule rule = [] {
        QuadratureRule r;
        r.exactness = 2;
        r.points = {
            {0.5, 0.5, 0.0, 1.0 / 3.0},
            {0.0, 0.5, 0.5, 1.0 / 3.0},
            {0.5, 0.0, 0.5, 1.0 / 3.0},
        };
        return r;
    }();
    return rule;
}

const QuadratureRule& QuadratureRule::triangle_centroid() {
    static const QuadratureRule rule = [] {
        QuadratureRule r;
        r.exactness = 1;
        r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0}};
        return r;
    }();
    return rule;
}

const EdgeQuadrature& EdgeQuadrature::gauss4() {
    static const EdgeQuadrature rule = [] {
        // Gauss-Legendre nodes on [-1,1], mapped to [0,1].
        const double x1 = 0.3399810435848563;
        const double x2 = 0.8611363115940526;
        const double w1 = 0.6521451548625461 / 2.0;
        const double w2 = 0.3478548451374538 / 2.0;
        EdgeQuadrature r;
        r.exactness = 7;
        r.points = {
            {0.5 * (1.0 - x2), w2},
            {0.5 * (1.0 - x1), w1},
            {0.5 * (1.0 + x1), w1},
            {0.5 * (1.0 + x2), w2},
        };
        return r;
    }();
    return rule;
}

}  // namespace spvi
