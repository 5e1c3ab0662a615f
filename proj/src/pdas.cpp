#include "spvi/pdas.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <sstream>

namespace spvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solve with the nodes in `fixed` held at `fixed_values`; returns the full
// nodal vector. residual_out reports the inner relative residual.
Eigen::VectorXd solve_constrained(const ObstacleSystem& sys,
                                  const std::vector<char>& fixed,
                                  const Eigen::VectorXd& fixed_values,
                                  double tol, double* residual_out) {
    const int n = sys.op.size();
    std::vector<int> unknown_of(n, -1);
    std::vector<int> unknowns;
    unknowns.reserve(n);
    for (int p = 0; p < n; ++p) {
        if (!fixed[p]) {
            unknown_of[p] = static_cast<int>(unknowns.size());
            unknowns.push_back(p);
        }
    }

    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (int p = 0; p < n; ++p)
        if (fixed[p]) full[p] = fixed_values[p];

    if (unknowns.empty()) {
        if (residual_out) *residual_out = 0.0;
        return full;
    }

    const Eigen::VectorXd coupling = sys.op.matrix * full;
    Eigen::VectorXd rhs(unknowns.size());
    for (std::size_t i = 0; i < unknowns.size(); ++i)
        rhs[static_cast<int>(i)] = sys.load[unknowns[i]] - coupling[unknowns[i]];

    std::vector<Eigen::Triplet<double>> triplets;
    for (int k = 0; k < sys.op.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.op.matrix, k); it; ++it) {
            const int r = unknown_of[it.row()];
            const int c = unknown_of[it.col()];
            if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
        }
    Eigen::SparseMatrix<double> reduced(unknowns.size(), unknowns.size());
    reduced.setFromTriplets(triplets.begin(), triplets.end());

    const Eigen::VectorXd x = linear_solve(reduced, rhs, tol);
    if (residual_out) {
        const double denom = rhs.norm();
        *residual_out = denom > 0.0 ? (reduced * x - rhs).norm() / denom : 0.0;
    }
    for (std::size_t i = 0; i < unknowns.size(); ++i) full[unknowns[i]] = x[static_cast<int>(i)];
    return full;
}

}  // namespace

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& rhs, double tol) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw SolverError("linear_solve: factorization failed (singular reduced system?)");
    Eigen::VectorXd x = solver.solve(rhs);
    const double denom = rhs.norm();
    double res = denom > 0.0 ? (A * x - rhs).norm() / denom : 0.0;
    if (res > tol) {
        // One step of iterative refinement before giving up.
        x += solver.solve(rhs - A * x);
        res = denom > 0.0 ? (A * x - rhs).norm() / denom : 0.0;
        if (res > tol) {
            std::ostringstream os;
            os << "linear_solve: residual " << res << " above tolerance " << tol;
            throw SolverError(os.str());
        }
    }
    return x;
}

DiscreteSolution solve_pdas(const ObstacleSystem& sys, const PdasOptions& opts,
                            const std::vector<char>* initial_active,
                            std::vector<PdasIterationRecord>* diagnostics) {
    if (!(opts.c > 0.0)) throw std::invalid_argument("solve_pdas: c must be positive");
    const int n = sys.op.size();
    for (int p = 0; p < n; ++p)
        if (sys.dirichlet[p] && sys.dirichlet_values[p] > sys.obstacle[p] + 1e-12)
            throw std::invalid_argument("solve_pdas: Dirichlet value above obstacle at node " +
                                        std::to_string(p));

    auto activatable = [&](int p) {
        return !sys.dirichlet[p] && std::isfinite(sys.obstacle[p]);
    };

    std::vector<char> active(n, 0);
    if (initial_active) {
        for (int p = 0; p < n; ++p) active[p] = (*initial_active)[p] && activatable(p);
    } else {
        // Violation set of the unconstrained solve.
        const Eigen::VectorXd unconstrained = solve_constrained(
            sys, sys.dirichlet, sys.dirichlet_values, opts.linear_tol, nullptr);
        for (int p = 0; p < n; ++p)
            active[p] = activatable(p) && unconstrained[p] > sys.obstacle[p];
    }

    std::vector<char> fixed(n, 0);
    Eigen::VectorXd fixed_values(n);
    Eigen::VectorXd phi;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        for (int p = 0; p < n; ++p) {
            fixed[p] = sys.dirichlet[p] || active[p];
            fixed_values[p] = sys.dirichlet[p] ? sys.dirichlet_values[p]
                              : active[p]      ? sys.obstacle[p]
                                               : 0.0;
        }
        double residual = 0.0;
        phi = solve_constrained(sys, fixed, fixed_values, opts.linear_tol, &residual);

        const Eigen::VectorXd defect = sys.load - sys.op.matrix * phi;
        lambda.setZero();
        for (int p = 0; p < n; ++p)
            if (active[p]) lambda[p] = defect[p];

        if (diagnostics) {
            int size = 0;
            for (char a : active) size += a;
            diagnostics->push_back({iter, size, residual});
        }

        std::vector<char> next(n, 0);
        for (int p = 0; p < n; ++p) {
            if (!activatable(p)) continue;
            next[p] = lambda[p] + opts.c * (phi[p] - sys.obstacle[p]) > 0.0;
        }
        if (next == active) {
            DiscreteSolution sol;
            sol.phi = P1Function(*sys.mesh, phi);
            sol.lambda = lambda;
            sol.active = active;
            sol.iterations = iter;
            return sol;
        }
        active = std::move(next);
    }
    throw SolverError("solve_pdas: active set did not stabilize within " +
                      std::to_string(opts.max_iterations) +
                      " iterations (active-set cycle detected)");
}

Eigen::VectorXd constraining_force(const ObstacleSystem& sys, const P1Function& phi) {
    Eigen::VectorXd r = sys.load - sys.op.matrix * phi.coeff;
    for (int p = 0; p < sys.op.size(); ++p)
        if (sys.dirichlet[p]) r[p] = 0.0;
    return r;
}

double feasibility_residual(const ObstacleSystem& sys, const DiscreteSolution& sol) {
    double worst = 0.0;
    for (int p = 0; p < sys.op.size(); ++p) {
        const double gap = sol.phi.coeff[p] - sys.obstacle[p];
        if (std::isfinite(gap)) worst = std::max(worst, gap);
    }
    return worst;
}

double complementarity_residual(const ObstacleSystem& sys, const DiscreteSolution& sol) {
    double worst = 0.0;
    for (int p = 0; p < sys.op.size(); ++p) {
        if (!std::isfinite(sys.obstacle[p])) continue;
        worst = std::max(worst, std::abs(sol.lambda[p] * (sys.obstacle[p] - sol.phi.coeff[p])));
    }
    return worst;
}

}  // namespace spvi
