#pragma once

#include <optional>
#include <vector>

#include "spvi/assembly.hpp"

namespace spvi {

/// Discrete obstacle problem: find phi <= g nodal with the complementarity
/// system A phi = b - lambda on free nodes, lambda >= 0, lambda (g - phi) = 0,
/// and phi fixed to Dirichlet values on the Dirichlet set. Obstacle entries
/// may be +infinity (unconstrained node).
struct ObstacleSystem {
    const Mesh* mesh = nullptr;
    SparseOperator op;
    Eigen::VectorXd load;
    Eigen::VectorXd obstacle;          // g_m nodal, +inf allowed
    std::vector<char> dirichlet;       // node flags
    Eigen::VectorXd dirichlet_values;  // used where dirichlet[p] != 0
};

struct PdasOptions {
    double c = 1.0;             // active-set scaling; any positive value
    int max_iterations = 100;
    double linear_tol = 1e-12;  // relative residual of inner solves
    double feas_tol = 1e-9;     // scaled by data magnitude in checks
    double comp_tol = 1e-9;
};

struct DiscreteSolution {
    P1Function phi;
    /// Nodal constraining force <lambda_m, phi_p>: the residual b - A phi on
    /// the active set, exact zero elsewhere (including Dirichlet nodes).
    Eigen::VectorXd lambda;
    std::vector<char> active;
    int iterations = 0;
};

struct PdasIterationRecord {
    int iteration = 0;
    int active_size = 0;
    double linear_residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Direct sparse solve of an SPD system; verifies the residual contract
/// ||A x - rhs|| <= tol ||rhs|| and throws SolverError otherwise.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& rhs, double tol = 1e-12);

/// Primal-dual active set iteration. Starts from the given active set when
/// provided (warm start); otherwise from the violation set of the
/// unconstrained solve. Stops when the active set repeats.
DiscreteSolution solve_pdas(const ObstacleSystem& sys, const PdasOptions& opts = {},
                            const std::vector<char>* initial_active = nullptr,
                            std::vector<PdasIterationRecord>* diagnostics = nullptr);

/// Nodal constraining force b - A phi on free nodes (zero at Dirichlet nodes).
Eigen::VectorXd constraining_force(const ObstacleSystem& sys, const P1Function& phi);

/// Largest feasibility violation max_p (phi - g)^+.
double feasibility_residual(const ObstacleSystem& sys, const DiscreteSolution& sol);
/// Largest complementarity defect max_p |lambda_p (g - phi)_p| over finite-g nodes.
double complementarity_residual(const ObstacleSystem& sys, const DiscreteSolution& sol);

}  // namespace spvi
