#pragma once

#include <Eigen/Sparse>

#include "spvi/fields.hpp"
#include "spvi/quadrature.hpp"

namespace spvi {

/// The assembled bilinear form  a_eps(u,v) = eps^2 (grad u, grad v) + (u, v)
/// over the P1 space. Symmetric; the mass part makes the free-node block
/// positive definite for every eps >= 0.
struct SparseOperator {
    Eigen::SparseMatrix<double> matrix;
    double epsilon = 1.0;

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// Exact element-wise assembly (P1 products integrated analytically).
SparseOperator assemble_operator(const Mesh& mesh, double epsilon);

/// Load vector b_p = int_Omega f phi_p + int_{Gamma^N} pi phi_p by quadrature.
Eigen::VectorXd assemble_load(const Mesh& mesh, const ProblemData& data,
                              const QuadratureRule& volume_rule = QuadratureRule::triangle_degree5(),
                              const EdgeQuadrature& edge_rule = EdgeQuadrature::gauss4());

/// int_{omega_p} phi_p = |omega_p| / 3 for every node p.
Eigen::VectorXd basis_integrals(const Mesh& mesh);

/// Energy norm of a P1 function through the assembled operator:
/// sqrt(c^T A c). Throws if the quadratic form is negative beyond roundoff.
double energy_norm(const P1Function& phi, const SparseOperator& op);

/// Dump in coordinate (COO) text format, one "row col value" line per entry.
void write_coo(const SparseOperator& op, std::ostream& os);

}  // namespace spvi
