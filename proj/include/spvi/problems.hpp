#pragma once

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spvi/fields.hpp"

namespace spvi {

/// Exact solution fields (canonical upper-obstacle orientation).
struct ExactSolution {
    ScalarField value;
    GradientField gradient;
};

/// Closed-form solution of the rotated-strip benchmark. On each non-rotated
/// strip the profile is c exp(x/eps) + c' exp(-x/eps) - 1 with coefficients
/// fixed by zero values at the strip walls; zero elsewhere.
struct ExactSolutionEx1 {
    double eps = 1.0;
    double alpha = 0.0;   // rotation angle
    double c1 = 0.0, c2 = 0.0;  // strip [-1.5,-0.5]
    double c3 = 0.0, c4 = 0.0;  // strip [0.5,1.5]

    static ExactSolutionEx1 make(double eps);

    /// Rotated abscissa entering the strip test.
    double strip_coordinate(double x, double y) const;
    bool in_strips(double x, double y) const;

    /// Profile in the non-rotated frame (lower-obstacle orientation, <= 0).
    double profile(double xt) const;
    double profile_derivative(double xt) const;
};

/// Radial profile of the smooth benchmark: r^2/2 - ln(r) - 1/2 for r >= 1,
/// zero inside the unit disk (C1 matching at r = 1).
struct ExactSolutionEx2 {
    double eps = 1.0;
    double profile(double r) const;
    double profile_derivative(double r) const;
};

/// A benchmark instance: initial mesh, canonical (upper obstacle) data,
/// optional exact solution, and a predicate for elements cut by kink lines of
/// the exact solution (those are integrated on a one-level subdivision).
struct ProblemDefinition {
    std::string name;
    Mesh initial_mesh;
    ProblemData data;
    std::optional<ExactSolution> exact;
    bool negated = false;  // mapped from a lower-obstacle formulation
    int default_initial_refinements = 0;
    std::function<bool(const Mesh&, int)> cut_by_kink;  // may be empty
};

/// Rotated strips under a constant force with the solution pressed onto the
/// obstacle outside the strips; pure Neumann boundary.
ProblemDefinition example1(double eps);

/// Smooth radial example on [-1,1]^2 with contact on the unit disk and
/// Dirichlet data on the whole boundary.
ProblemDefinition example2(double eps);

/// Problem registry: "example1" or "example2".
ProblemDefinition make_problem(const std::string& name, double eps);

/// Custom problem from a JSON descriptor: a domain (explicit mesh in the
/// snapshot schema, or a convex polygon fan-triangulated around its centroid)
/// plus field expressions in the small grammar of Expression, optionally
/// piecewise as [{"where": predicate, "value": expr}, ..., {"value": expr}].
/// An absent obstacle means unconstrained.
ProblemDefinition problem_from_json(const nlohmann::json& descriptor, double eps);

struct ErrorNorms {
    double energy = 0.0;  // ||phi - phi_m||_eps
    double h1 = 0.0;      // ||phi - phi_m||_1
};

/// Element-wise quadrature of the exact error in the eps-energy and H1 norms.
/// Elements flagged by `cut_by_kink` are integrated on a one-level virtual
/// quadrisection to reduce the kink error.
ErrorNorms energy_error(const Mesh& mesh, const P1Function& phi, const ExactSolution& exact,
                        double eps, const std::function<bool(const Mesh&, int)>& cut_by_kink);

}  // namespace spvi
