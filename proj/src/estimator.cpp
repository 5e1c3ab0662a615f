#include "spvi/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace spvi {

namespace {

double max_finite_abs(const Eigen::VectorXd& v) {
    double m = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (std::isfinite(v[i])) m = std::max(m, std::abs(v[i]));
    return m;
}

struct Weights {
    double vol, side;        // min{h_p/eps, 1} and its side companion
    double vol_nr, side_nr;  // h_p and h_p^(1/2)
};

Weights node_weights(double h, double eps) {
    const double w = std::min(h / eps, 1.0);
    return {w, std::sqrt(w / eps), h, std::sqrt(h)};
}

// int_e (f - phi)^2 with the degree-5 rule; f may be absent (treated as 0).
double volume_residual_sq(const Mesh& mesh, int e, const P1Function& phi,
                          const ScalarField& f) {
    const auto& t = mesh.element(e);
    const Vec2 p0 = mesh.vertex(t[0]);
    const Vec2 p1 = mesh.vertex(t[1]);
    const Vec2 p2 = mesh.vertex(t[2]);
    const double area = mesh.element_area(e);
    double acc = 0.0;
    for (const auto& q : QuadratureRule::triangle_degree5().points) {
        const Vec2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
        const double fval = f ? f(x.x, x.y) : 0.0;
        const double r = fval - phi.value(e, q.l0, q.l1, q.l2);
        acc += q.w * r * r;
    }
    return area * acc;
}

// Neumann residual pi - eps^2 grad(phi).n at the parameter point t of edge s.
double neumann_residual(const Mesh& mesh, int s, double t, const P1Function& phi,
                        const ProblemData& data) {
    const auto& ed = mesh.edge(s);
    const Vec2 a = mesh.vertex(ed.a);
    const Vec2 b = mesh.vertex(ed.b);
    const Vec2 x = a + (b - a) * t;
    const Vec2 n = mesh.outward_normal(s, ed.left);
    const double flux = data.epsilon * data.epsilon * dot(phi.gradient(ed.left), n);
    const double pival = data.neumann ? data.neumann(x.x, x.y) : 0.0;
    return pival - flux;
}

// Barycentric corners (w.r.t. the parent element) of the sub-triangle at the
// local vertex `loc` after two red refinements: the corner triangle scaled by
// 1/4 towards the vertex.
std::array<std::array<double, 3>, 3> corner_subtriangle(int loc) {
    std::array<std::array<double, 3>, 3> b{};
    b[0][loc] = 1.0;
    for (int j = 1; j < 3; ++j) {
        b[j][loc] = 0.75;
        b[j][(loc + j) % 3] = 0.25;
    }
    return b;
}

}  // namespace

double gradient_jump(const Mesh& mesh, const P1Function& phi, int s) {
    const auto& ed = mesh.edge(s);
    const Vec2 nl = mesh.outward_normal(s, ed.left);
    const Vec2 nr = mesh.outward_normal(s, ed.right);
    return -(dot(phi.gradient(ed.left), nl) + dot(phi.gradient(ed.right), nr));
}

std::vector<NodeClass> classify_nodes(const Mesh& mesh, const PatchIndex& patches,
                                      const P1Function& phi, const Eigen::VectorXd& g_nodal,
                                      const Eigen::VectorXd& lambda, const ProblemData& data,
                                      const EstimatorOptions& opts) {
    (void)lambda;
    const int nv = mesh.vertex_count();
    const double tau = opts.contact_tol_scale * (1.0 + max_finite_abs(g_nodal));
    std::vector<char> contact(nv, 0);
    for (int p = 0; p < nv; ++p)
        contact[p] = std::isfinite(g_nodal[p]) &&
                     std::abs(phi.coeff[p] - g_nodal[p]) <= tau;

    const double eps2 = data.epsilon * data.epsilon;
    std::vector<NodeClass> classes(nv, NodeClass::NoContact);
    for (int p = 0; p < nv; ++p) {
        if (mesh.node_kind(p) == NodeKind::Dirichlet || !contact[p]) continue;

        bool full = std::all_of(patches.nodes[p].begin(), patches.nodes[p].end(),
                                [&](int q) { return contact[q] != 0; });
        if (full) {
            // Sufficient sign test: all three residual densities nonnegative
            // on the patch, so the local constraining force cannot be negative.
            for (int e : patches.elements[p]) {
                const Vec2 c = mesh.element_centroid(e);
                const double fc = data.f ? data.f(c.x, c.y) : 0.0;
                if (fc - phi.value(e, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0) < -opts.sign_tol) {
                    full = false;
                    break;
                }
            }
            if (full)
                for (int s : patches.interior_edges[p]) {
                    if (eps2 * gradient_jump(mesh, phi, s) < -opts.sign_tol) {
                        full = false;
                        break;
                    }
                }
            if (full)
                for (int s : patches.neumann_edges[p]) {
                    if (neumann_residual(mesh, s, 0.5, phi, data) < -opts.sign_tol) {
                        full = false;
                        break;
                    }
                }
        }
        classes[p] = full ? NodeClass::FullContact : NodeClass::SemiContact;
    }
    return classes;
}

void eta123(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
            const ProblemData& data, const std::vector<NodeClass>& classes,
            std::array<Eigen::VectorXd, 7>& eta_node,
            std::array<Eigen::VectorXd, 3>& eta_nr_node) {
    const int nv = mesh.vertex_count();
    const double eps2 = data.epsilon * data.epsilon;

    Eigen::VectorXd vol_sq(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e)
        vol_sq[e] = volume_residual_sq(mesh, e, phi, data.f);

    Eigen::VectorXd jump_sq = Eigen::VectorXd::Zero(mesh.edge_count());
    Eigen::VectorXd neu_sq = Eigen::VectorXd::Zero(mesh.edge_count());
    for (int s = 0; s < mesh.edge_count(); ++s) {
        const auto& ed = mesh.edge(s);
        if (ed.right != -1) {
            // Jumps of P1 gradients are constant along the edge.
            const double j = eps2 * gradient_jump(mesh, phi, s);
            jump_sq[s] = j * j * mesh.edge_length(s);
        } else if (mesh.boundary()[ed.boundary_id].tag == BoundaryTag::Neumann) {
            double acc = 0.0;
            for (const auto& q : EdgeQuadrature::gauss4().points) {
                const double r = neumann_residual(mesh, s, q.t, phi, data);
                acc += q.w * r * r;
            }
            neu_sq[s] = acc * mesh.edge_length(s);
        }
    }

    for (int k = 0; k < 3; ++k) {
        eta_node[k] = Eigen::VectorXd::Zero(nv);
        eta_nr_node[k] = Eigen::VectorXd::Zero(nv);
    }
    for (int p = 0; p < nv; ++p) {
        if (classes[p] == NodeClass::FullContact) continue;
        const Weights w = node_weights(patches.diameter[p], data.epsilon);
        double v = 0.0, ji = 0.0, ne = 0.0;
        for (int e : patches.elements[p]) v += vol_sq[e];
        for (int s : patches.interior_edges[p]) ji += jump_sq[s];
        for (int s : patches.neumann_edges[p]) ne += neu_sq[s];
        v = std::sqrt(v);
        ji = std::sqrt(ji);
        ne = std::sqrt(ne);
        eta_node[0][p] = w.vol * v;
        eta_node[1][p] = w.side * ji;
        eta_node[2][p] = w.side * ne;
        eta_nr_node[0][p] = w.vol_nr * v;
        eta_nr_node[1][p] = w.side_nr * ji;
        eta_nr_node[2][p] = w.side_nr * ne;
    }
}

Eigen::VectorXd eta4(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
                     const Eigen::VectorXd& g_nodal, const Eigen::VectorXd& lambda,
                     const std::vector<NodeClass>& classes, const EstimatorOptions& opts) {
    const int nv = mesh.vertex_count();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nv);
    const double lambda_scale = 1.0 + max_finite_abs(lambda);
    const double gap_scale = 1.0 + max_finite_abs(g_nodal) + phi.coeff.cwiseAbs().maxCoeff();

    for (int p = 0; p < nv; ++p) {
        if (classes[p] != NodeClass::SemiContact) continue;
        if (lambda[p] < -opts.clip_tol * lambda_scale)
            throw std::runtime_error("eta4: negative constraining force at contact node " +
                                     std::to_string(p) + " (sign-convention bug?)");
        const double sp = std::max(lambda[p], 0.0) / (patches.area[p] / 3.0);
        if (sp == 0.0) continue;

        double integral = 0.0;
        for (int e : patches.elements[p]) {
            const auto& t = mesh.element(e);
            const int loc = (t[0] == p) ? 0 : (t[1] == p) ? 1 : 2;
            // Nodal gap g_m - phi_m; unconstrained (infinite) nodes carry no gap.
            std::array<double, 3> gap;
            for (int i = 0; i < 3; ++i)
                gap[i] = std::isfinite(g_nodal[t[i]]) ? g_nodal[t[i]] - phi.coeff[t[i]] : 0.0;
            const auto corner = corner_subtriangle(loc);
            // Quadratic integrand: the edge-midpoint rule on the sub-triangle
            // is exact.
            double acc = 0.0;
            for (int m = 0; m < 3; ++m) {
                std::array<double, 3> l{};
                for (int i = 0; i < 3; ++i)
                    l[i] = 0.5 * (corner[m][i] + corner[(m + 1) % 3][i]);
                const double gapv = gap[0] * l[0] + gap[1] * l[1] + gap[2] * l[2];
                acc += gapv * l[loc];
            }
            integral += acc / 3.0 * (mesh.element_area(e) / 16.0);
        }
        const double radicand = sp * integral;
        if (radicand < -opts.clip_tol * lambda_scale * gap_scale)
            throw std::runtime_error("eta4: negative radicand at node " + std::to_string(p));
        out[p] = std::sqrt(std::max(radicand, 0.0));
    }
    return out;
}

void eta567(const Mesh& mesh, const PatchIndex& patches, const P1Function& phi,
            const Eigen::VectorXd& g_nodal, const Eigen::VectorXd& lambda,
            const std::vector<NodeClass>& classes, const ProblemData& data,
            std::array<Eigen::VectorXd, 7>& eta_node, const EstimatorOptions& opts) {
    const int nv = mesh.vertex_count();
    for (int k = 4; k < 7; ++k) eta_node[k] = Eigen::VectorXd::Zero(nv);
    if (!data.obstacle) return;

    const double eps2 = data.epsilon * data.epsilon;
    const auto& rule = QuadratureRule::triangle_degree5();
    const auto& edge_rule = EdgeQuadrature::gauss4();

    // (g - g_m)^+ at a point of element e; zero wherever either function is
    // not finite (no constraint modeled there).
    auto gm_excess = [&](int e, const std::array<double, 3>& l, const Vec2& x) {
        const auto& t = mesh.element(e);
        double gm = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (!std::isfinite(g_nodal[t[i]])) return 0.0;
            gm += l[i] * g_nodal[t[i]];
        }
        const double g = data.obstacle(x.x, x.y);
        if (!std::isfinite(g)) return 0.0;
        return std::max(g - gm, 0.0);
    };

    auto obstacle_grad = [&](double x, double y, double h) {
        if (data.obstacle_gradient) return data.obstacle_gradient(x, y);
        const double d = std::max(1e-6 * h, 1e-12);
        const double gxp = data.obstacle(x + d, y), gxm = data.obstacle(x - d, y);
        const double gyp = data.obstacle(x, y + d), gym = data.obstacle(x, y - d);
        if (!std::isfinite(gxp) || !std::isfinite(gxm) || !std::isfinite(gyp) ||
            !std::isfinite(gym))
            return Vec2{0.0, 0.0};
        return Vec2{(gxp - gxm) / (2.0 * d), (gyp - gym) / (2.0 * d)};
    };

    const double lambda_scale = 1.0 + max_finite_abs(lambda);
    for (int p = 0; p < nv; ++p) {
        if (classes[p] == NodeClass::NoContact) continue;

        // eta_5: semi-contact, weighted gap between g and g_m on the reduced patch.
        if (classes[p] == NodeClass::SemiContact) {
            const double sp = std::max(lambda[p], 0.0) / (patches.area[p] / 3.0);
            if (sp > 0.0) {
                double integral = 0.0;
                for (int e : patches.elements[p]) {
                    const auto& t = mesh.element(e);
                    const int loc = (t[0] == p) ? 0 : (t[1] == p) ? 1 : 2;
                    const auto corner = corner_subtriangle(loc);
                    const Vec2 p0 = mesh.vertex(t[0]);
                    const Vec2 p1 = mesh.vertex(t[1]);
                    const Vec2 p2 = mesh.vertex(t[2]);
                    double acc = 0.0;
                    for (const auto& q : rule.points) {
                        std::array<double, 3> l{};
                        for (int i = 0; i < 3; ++i)
                            l[i] = q.l0 * corner[0][i] + q.l1 * corner[1][i] + q.l2 * corner[2][i];
                        const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
                        acc += q.w * gm_excess(e, l, x) * l[loc];
                    }
                    integral += acc * (mesh.element_area(e) / 16.0);
                }
                eta_node[4][p] = std::sqrt(std::max(sp * integral, 0.0));
            }
        }

        // eta_6: full-contact residual pairing with (g - g_m)^+ phi_p.
        if (classes[p] == NodeClass::FullContact) {
            double pairing = 0.0;
            for (int e : patches.elements[p]) {
                const auto& t = mesh.element(e);
                const int loc = (t[0] == p) ? 0 : (t[1] == p) ? 1 : 2;
                const Vec2 p0 = mesh.vertex(t[0]);
                const Vec2 p1 = mesh.vertex(t[1]);
                const Vec2 p2 = mesh.vertex(t[2]);
                const double area = mesh.element_area(e);
                for (const auto& q : rule.points) {
                    const std::array<double, 3> l{q.l0, q.l1, q.l2};
                    const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
                    const double fv = data.f ? data.f(x.x, x.y) : 0.0;
                    const double resid = fv - phi.value(e, l[0], l[1], l[2]);
                    pairing += area * q.w * resid * gm_excess(e, l, x) * l[loc];
                }
            }
            auto edge_term = [&](int s, double density_const, bool use_neumann) {
                const auto& ed = mesh.edge(s);
                const int e = ed.left;
                const auto& t = mesh.element(e);
                const Vec2 a = mesh.vertex(ed.a);
                const Vec2 b = mesh.vertex(ed.b);
                const double len = dist(a, b);
                double acc = 0.0;
                for (const auto& q : edge_rule.points) {
                    const Vec2 x = a + (b - a) * q.t;
                    // Barycentric coordinates of x on the adjacent element.
                    std::array<double, 3> l{};
                    {
                        const Vec2 q0 = mesh.vertex(t[0]);
                        const Vec2 q1 = mesh.vertex(t[1]);
                        const Vec2 q2 = mesh.vertex(t[2]);
                        const double inv = 1.0 / signed_area2(q0, q1, q2);
                        l[0] = signed_area2(x, q1, q2) * inv;
                        l[1] = signed_area2(q0, x, q2) * inv;
                        l[2] = signed_area2(q0, q1, x) * inv;
                    }
                    double phi_p = 0.0;
                    for (int i = 0; i < 3; ++i)
                        if (t[i] == p) phi_p = l[i];
                    const double density =
                        use_neumann ? neumann_residual(mesh, s, q.t, phi, data) : density_const;
                    acc += q.w * density * gm_excess(e, l, x) * phi_p;
                }
                return acc * len;
            };
            for (int s : patches.interior_edges[p])
                pairing += edge_term(s, eps2 * gradient_jump(mesh, phi, s), false);
            for (int s : patches.neumann_edges[p]) pairing += edge_term(s, 0.0, true);
            if (pairing < -opts.clip_tol * lambda_scale)
                pairing = 0.0;  // quadrature noise on a nonnegative pairing
            eta_node[5][p] = std::sqrt(std::max(pairing, 0.0));
        }

        // eta_7: energy norm of the infeasibility (phi_m - g)^+ phi_p.
        {
            double acc = 0.0;
            for (int e : patches.elements[p]) {
                const auto& t = mesh.element(e);
                const int loc = (t[0] == p) ? 0 : (t[1] == p) ? 1 : 2;
                const Vec2 p0 = mesh.vertex(t[0]);
                const Vec2 p1 = mesh.vertex(t[1]);
                const Vec2 p2 = mesh.vertex(t[2]);
                const double area = mesh.element_area(e);
                const double diam = mesh.element_diameter(e);
                const auto grads = barycentric_gradients(mesh, e);
                const Vec2 grad_phi = phi.gradient(e);
                for (const auto& q : rule.points) {
                    const std::array<double, 3> l{q.l0, q.l1, q.l2};
                    const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
                    const double g = data.obstacle(x.x, x.y);
                    if (!std::isfinite(g)) continue;
                    const double excess = phi.value(e, l[0], l[1], l[2]) - g;
                    if (excess <= 0.0) continue;
                    const double v = excess * l[loc];
                    // Gradient of the piecewise-smooth integrand at the point.
                    const Vec2 grad_g = obstacle_grad(x.x, x.y, diam);
                    const Vec2 gv = (grad_phi - grad_g) * l[loc] + excess * grads[loc];
                    acc += area * q.w * (eps2 * norm2(gv) + v * v);
                }
            }
            eta_node[6][p] = std::sqrt(std::max(acc, 0.0));
        }
    }
}

Eigen::VectorXd element_indicators(const Mesh& mesh, const PatchIndex& patches,
                                   const std::vector<Eigen::VectorXd*>& node_components) {
    Eigen::VectorXd ind2 = Eigen::VectorXd::Zero(mesh.element_count());
    for (int p = 0; p < mesh.vertex_count(); ++p) {
        double total2 = 0.0;
        for (const auto* c : node_components) total2 += (*c)[p] * (*c)[p];
        if (total2 == 0.0) continue;
        const double share = total2 / static_cast<double>(patches.elements[p].size());
        for (int e : patches.elements[p]) ind2[e] += share;
    }
    return ind2.cwiseSqrt();
}

void totals(const Mesh& mesh, const PatchIndex& patches, const ProblemData& data,
            EstimatorBreakdown& b) {
    for (int k = 0; k < 7; ++k) b.eta_k[k] = std::sqrt(b.eta_node[k].squaredNorm());
    for (int k = 0; k < 3; ++k) b.eta_nr_k[k] = std::sqrt(b.eta_nr_node[k].squaredNorm());

    b.eta = 0.0;
    double rss = 0.0;
    for (int k = 0; k < 7; ++k) {
        b.eta += b.eta_k[k];
        rss += b.eta_k[k] * b.eta_k[k];
    }
    b.eta_rss = std::sqrt(rss);
    b.eta_std = b.eta_k[0] + b.eta_k[1] + b.eta_k[2];
    // Only the epsilon weights change for the non-robust variant; the contact
    // contributions carry no such weight and are kept as they are.
    b.eta_nr = b.eta_nr_k[0] + b.eta_nr_k[1] + b.eta_nr_k[2] + b.eta_k[3] + b.eta_k[4] +
               b.eta_k[5] + b.eta_k[6];

    // Data oscillation with piecewise constant (centroid / midpoint) means.
    Eigen::VectorXd osc_vol = Eigen::VectorXd::Zero(mesh.element_count());
    if (data.f) {
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto& t = mesh.element(e);
            const Vec2 p0 = mesh.vertex(t[0]);
            const Vec2 p1 = mesh.vertex(t[1]);
            const Vec2 p2 = mesh.vertex(t[2]);
            const Vec2 c = mesh.element_centroid(e);
            const double mean = data.f(c.x, c.y);
            double acc = 0.0;
            for (const auto& q : QuadratureRule::triangle_degree5().points) {
                const Vec2 x = q.l0 * p0 + q.l1 * p1 + q.l2 * p2;
                const double d = mean - data.f(x.x, x.y);
                acc += q.w * d * d;
            }
            osc_vol[e] = acc * mesh.element_area(e);
        }
    }
    Eigen::VectorXd osc_edge = Eigen::VectorXd::Zero(mesh.edge_count());
    if (data.neumann) {
        for (int s = 0; s < mesh.edge_count(); ++s) {
            const auto& ed = mesh.edge(s);
            if (ed.right != -1 ||
                mesh.boundary()[ed.boundary_id].tag != BoundaryTag::Neumann)
                continue;
            const Vec2 a = mesh.vertex(ed.a);
            const Vec2 bb = mesh.vertex(ed.b);
            const Vec2 mid = (a + bb) * 0.5;
            const double mean = data.neumann(mid.x, mid.y);
            double acc = 0.0;
            for (const auto& q : EdgeQuadrature::gauss4().points) {
                const Vec2 x = a + (bb - a) * q.t;
                const double d = mean - data.neumann(x.x, x.y);
                acc += q.w * d * d;
            }
            osc_edge[s] = acc * mesh.edge_length(s);
        }
    }
    double of = 0.0, opi = 0.0;
    for (int p = 0; p < mesh.vertex_count(); ++p) {
        const Weights w = node_weights(patches.diameter[p], data.epsilon);
        double v = 0.0, ne = 0.0;
        for (int e : patches.elements[p]) v += osc_vol[e];
        for (int s : patches.neumann_edges[p]) ne += osc_edge[s];
        of += w.vol * w.vol * v;
        opi += w.side * w.side * ne;
    }
    b.osc_f = std::sqrt(of);
    b.osc_pi = std::sqrt(opi);

    std::vector<Eigen::VectorXd*> comps_eta, comps_std, comps_nr;
    for (int k = 0; k < 7; ++k) comps_eta.push_back(&b.eta_node[k]);
    for (int k = 0; k < 3; ++k) comps_std.push_back(&b.eta_node[k]);
    for (int k = 0; k < 3; ++k) comps_nr.push_back(&b.eta_nr_node[k]);
    for (int k = 3; k < 7; ++k) comps_nr.push_back(&b.eta_node[k]);
    b.indicator_eta = element_indicators(mesh, patches, comps_eta);
    b.indicator_std = element_indicators(mesh, patches, comps_std);
    b.indicator_nr = element_indicators(mesh, patches, comps_nr);
}

EstimatorBreakdown compute_estimator(const Mesh& mesh, const PatchIndex& patches,
                                     const DiscreteSolution& sol,
                                     const Eigen::VectorXd& g_nodal,
                                     const ProblemData& data,
                                     const EstimatorOptions& opts) {
    EstimatorBreakdown b;
    b.node_class = classify_nodes(mesh, patches, sol.phi, g_nodal, sol.lambda, data, opts);
    eta123(mesh, patches, sol.phi, data, b.node_class, b.eta_node, b.eta_nr_node);
    b.eta_node[3] = eta4(mesh, patches, sol.phi, g_nodal, sol.lambda, b.node_class, opts);
    eta567(mesh, patches, sol.phi, g_nodal, sol.lambda, b.node_class, data, b.eta_node, opts);
    b.s = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int p = 0; p < mesh.vertex_count(); ++p)
        if (b.node_class[p] != NodeClass::NoContact)
            b.s[p] = std::max(sol.lambda[p], 0.0) / (patches.area[p] / 3.0);
    totals(mesh, patches, data, b);
    return b;
}

void write_breakdown_csv(const EstimatorBreakdown& b, std::ostream& os) {
    os << "node_id,class,s_p,eta1,eta2,eta3,eta4,eta5,eta6,eta7\n";
    char buf[512];
    for (int p = 0; p < b.s.size(); ++p) {
        const char* cls = b.node_class[p] == NodeClass::FullContact   ? "full"
                          : b.node_class[p] == NodeClass::SemiContact ? "semi"
                                                                      : "none";
        std::snprintf(buf, sizeof(buf),
                      "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", p, cls,
                      b.s[p], b.eta_node[0][p], b.eta_node[1][p], b.eta_node[2][p],
                      b.eta_node[3][p], b.eta_node[4][p], b.eta_node[5][p], b.eta_node[6][p]);
        os << buf;
    }
}

void write_indicator_csv(const EstimatorBreakdown& b, EstimatorChoice choice,
                         std::ostream& os) {
    os << "element_id,indicator\n";
    const Eigen::VectorXd& ind = b.indicator(choice);
    char buf[64];
    for (int e = 0; e < ind.size(); ++e) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", e, ind[e]);
        os << buf;
    }
}

}  // namespace spvi
