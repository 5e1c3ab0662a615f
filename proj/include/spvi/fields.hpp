#pragma once

#include <functional>

#include <Eigen/Dense>

#include "spvi/mesh.hpp"

namespace spvi {

using ScalarField = std::function<double(double, double)>;
using GradientField = std::function<Vec2(double, double)>;

/// Continuous piecewise linear function given by one coefficient per node.
struct P1Function {
    const Mesh* mesh = nullptr;
    Eigen::VectorXd coeff;

    P1Function() = default;
    P1Function(const Mesh& m, Eigen::VectorXd c) : mesh(&m), coeff(std::move(c)) {}
    static P1Function zero(const Mesh& m) {
        return {m, Eigen::VectorXd::Zero(m.vertex_count())};
    }

    /// Value at the point of element e with barycentric coordinates l.
    double value(int e, double l0, double l1, double l2) const {
        const auto& t = mesh->element(e);
        return l0 * coeff[t[0]] + l1 * coeff[t[1]] + l2 * coeff[t[2]];
    }

    /// Constant gradient on element e.
    Vec2 gradient(int e) const;
};

/// Gradients of the three barycentric coordinates of element e.
std::array<Vec2, 3> barycentric_gradients(const Mesh& mesh, int e);

/// Data of the continuous problem: coefficients and boundary/obstacle fields.
/// The obstacle may return +infinity where the solution is unconstrained.
struct ProblemData {
    double epsilon = 1.0;
    ScalarField f;                      // force density on Omega
    ScalarField neumann;                // pi on Gamma^N
    ScalarField obstacle;               // g (upper obstacle)
    ScalarField dirichlet;              // phi^D on Gamma^D
    GradientField obstacle_gradient;    // optional; finite differences if absent
};

/// Nodal interpolation of a scalar field.
Eigen::VectorXd interpolate(const Mesh& mesh, const ScalarField& field);

}  // namespace spvi
