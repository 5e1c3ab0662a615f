#include "spvi/assembly.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace spvi {

std::array<Vec2, 3> barycentric_gradients(const Mesh& mesh, int e) {
    const auto& t = mesh.element(e);
    const Vec2 p0 = mesh.vertex(t[0]);
    const Vec2 p1 = mesh.vertex(t[1]);
    const Vec2 p2 = mesh.vertex(t[2]);
    const double inv = 1.0 / signed_area2(p0, p1, p2);
    return {Vec2{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv},
            Vec2{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
            Vec2{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
}

Vec2 P1Function::gradient(int e) const {
    const auto grads = barycentric_gradients(*mesh, e);
    const auto& t = mesh->element(e);
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) g += coeff[t[i]] * grads[i];
    return g;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const ScalarField& field) {
    Eigen::VectorXd v(mesh.vertex_count());
    for (int p = 0; p < mesh.vertex_count(); ++p)
        v[p] = field(mesh.vertex(p).x, mesh.vertex(p).y);
    return v;
}

SparseOperator assemble_operator(const Mesh& mesh, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("assemble_operator: epsilon < 0");
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.element_count() * 9);
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.element(e);
        const auto grads = barycentric_gradients(mesh, e);
        const double area = mesh.element_area(e);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double stiff = area * dot(grads[i], grads[j]);
                const double mass = area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
                triplets.emplace_back(t[i], t[j], epsilon * epsilon * stiff + mass);
            }
    }
    SparseOperator op;
    op.epsilon = epsilon;
    op.matrix.resize(mesh.vertex_count(), mesh.vertex_count());
    op.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return op;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const ProblemData& data,
                              const QuadratureRule& volume_rule,
                              const EdgeQuadrature& edge_rule) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.vertex_count());
    if (data.f) {
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto& t = mesh.element(e);
            const Vec2 p0 = mesh.vertex(t[0]);
            const Vec2 p1 = mesh.vertex(t[1]);
            const Vec2 p2 = mesh.vertex(t[2]);
            const double area = mesh.element_area(e);
            for (const auto& q : volume_rule.points) {
                const Vec2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
                const double fw = area * q.w * data.f(x.x, x.y);
                b[t[0]] += fw * q.l0;
                b[t[1]] += fw * q.l1;
                b[t[2]] += fw * q.l2;
            }
        }
    }
    if (data.neumann) {
        for (const auto& be : mesh.boundary()) {
            if (be.tag != BoundaryTag::Neumann) continue;
            const Vec2 a = mesh.vertex(be.a);
            const Vec2 c = mesh.vertex(be.b);
            const double len = dist(a, c);
            for (const auto& q : edge_rule.points) {
                const Vec2 x = a + (c - a) * q.t;
                const double fw = len * q.w * data.neumann(x.x, x.y);
                b[be.a] += fw * (1.0 - q.t);
                b[be.b] += fw * q.t;
            }
        }
    }
    return b;
}

Eigen::VectorXd basis_integrals(const Mesh& mesh) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const double third = mesh.element_area(e) / 3.0;
        for (int p : mesh.element(e)) v[p] += third;
    }
    return v;
}

double energy_norm(const P1Function& phi, const SparseOperator& op) {
    const double q = phi.coeff.dot(op.matrix * phi.coeff);
    const double scale = 1.0 + phi.coeff.squaredNorm();
    if (q < -1e-12 * scale)
        throw std::runtime_error("energy_norm: negative quadratic form (assembly bug?)");
    return std::sqrt(std::max(q, 0.0));
}

void write_coo(const SparseOperator& op, std::ostream& os) {
    for (int k = 0; k < op.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(op.matrix, k); it; ++it)
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace spvi
