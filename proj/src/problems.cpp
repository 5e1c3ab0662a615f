#include "spvi/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spvi/expression.hpp"
#include "spvi/quadrature.hpp"

namespace spvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mesh square_mesh(double half_width, BoundaryTag tag) {
    const double w = half_width;
    return Mesh::build({{-w, -w}, {w, -w}, {w, w}, {-w, w}},
                       {{{0, 1, 2}}, {{0, 2, 3}}},
                       {{0, 1, tag}, {1, 2, tag}, {2, 3, tag}, {3, 0, tag}});
}

// cosh(u)/cosh(v) - 1 for 0 <= u <= v, without overflow.
double cosh_ratio_minus_one(double u, double v) {
    return std::exp(u - v) * (1.0 + std::exp(-2.0 * u)) / (1.0 + std::exp(-2.0 * v)) - 1.0;
}

// sinh(u)/cosh(v) for |u| <= v.
double sinh_over_cosh(double u, double v) {
    const double au = std::abs(u);
    const double m = std::exp(au - v) * (1.0 - std::exp(-2.0 * au)) / (1.0 + std::exp(-2.0 * v));
    return u < 0.0 ? -m : m;
}

}  // namespace

ExactSolutionEx1 ExactSolutionEx1::make(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("example1: eps must be positive");
    ExactSolutionEx1 s;
    s.eps = eps;
    s.alpha = -std::numbers::pi / 16.0;
    // Wall conditions phi~(wall) = 0 as 2x2 systems, solved by Cramer's rule.
    // The coefficients overflow for eps below ~2.5e-3; evaluation goes through
    // the stable cosh form either way.
    const double a11 = std::exp(-1.5 / eps), a12 = std::exp(1.5 / eps);
    const double a21 = std::exp(-0.5 / eps), a22 = std::exp(0.5 / eps);
    const double det = a11 * a22 - a12 * a21;
    s.c1 = (a22 - a12) / det;
    s.c2 = (a11 - a21) / det;
    const double b11 = std::exp(0.5 / eps), b12 = std::exp(-0.5 / eps);
    const double b21 = std::exp(1.5 / eps), b22 = std::exp(-1.5 / eps);
    const double det2 = b11 * b22 - b12 * b21;
    s.c3 = (b22 - b12) / det2;
    s.c4 = (b11 - b21) / det2;
    return s;
}

double ExactSolutionEx1::strip_coordinate(double x, double y) const {
    return std::cos(alpha) * x + std::sin(alpha) * y;
}

bool ExactSolutionEx1::in_strips(double x, double y) const {
    const double xt = strip_coordinate(x, y);
    return (xt > -1.5 && xt < -0.5) || (xt > 0.5 && xt < 1.5);
}

double ExactSolutionEx1::profile(double xt) const {
    if (xt >= -1.5 && xt <= -0.5) return cosh_ratio_minus_one(std::abs(xt + 1.0) / eps, 0.5 / eps);
    if (xt >= 0.5 && xt <= 1.5) return cosh_ratio_minus_one(std::abs(xt - 1.0) / eps, 0.5 / eps);
    return 0.0;
}

double ExactSolutionEx1::profile_derivative(double xt) const {
    if (xt >= -1.5 && xt <= -0.5) return sinh_over_cosh((xt + 1.0) / eps, 0.5 / eps) / eps;
    if (xt >= 0.5 && xt <= 1.5) return sinh_over_cosh((xt - 1.0) / eps, 0.5 / eps) / eps;
    return 0.0;
}

ProblemDefinition example1(double eps) {
    const auto sol = ExactSolutionEx1::make(eps);

    ProblemDefinition p;
    p.name = "example1";
    p.initial_mesh = square_mesh(2.5, BoundaryTag::Neumann);
    p.negated = true;
    p.default_initial_refinements = 4;

    p.data.epsilon = eps;
    p.data.f = [](double, double) { return 1.0; };
    p.data.neumann = [](double, double) { return 0.0; };
    // Constrained to zero outside the open strips; free inside them.
    p.data.obstacle = [sol](double x, double y) { return sol.in_strips(x, y) ? kInf : 0.0; };
    p.data.obstacle_gradient = [](double, double) { return Vec2{0.0, 0.0}; };
    p.data.dirichlet = [](double, double) { return 0.0; };

    ExactSolution exact;
    exact.value = [sol](double x, double y) {
        return -sol.profile(sol.strip_coordinate(x, y));
    };
    exact.gradient = [sol](double x, double y) {
        const double d = -sol.profile_derivative(sol.strip_coordinate(x, y));
        return Vec2{d * std::cos(sol.alpha), d * std::sin(sol.alpha)};
    };
    p.exact = exact;

    p.cut_by_kink = [sol](const Mesh& mesh, int e) {
        const auto& t = mesh.element(e);
        double lo = kInf, hi = -kInf;
        for (int v : t) {
            const double xt = sol.strip_coordinate(mesh.vertex(v).x, mesh.vertex(v).y);
            lo = std::min(lo, xt);
            hi = std::max(hi, xt);
        }
        for (double wall : {-1.5, -0.5, 0.5, 1.5})
            if (lo < wall && wall < hi) return true;
        return false;
    };
    return p;
}

double ExactSolutionEx2::profile(double r) const {
    return r >= 1.0 ? 0.5 * r * r - std::log(r) - 0.5 : 0.0;
}

double ExactSolutionEx2::profile_derivative(double r) const {
    return r >= 1.0 ? r - 1.0 / r : 0.0;
}

ProblemDefinition example2(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("example2: eps must be positive");
    const ExactSolutionEx2 sol{eps};

    ProblemDefinition p;
    p.name = "example2";
    p.initial_mesh = square_mesh(1.0, BoundaryTag::Dirichlet);
    p.negated = true;
    p.default_initial_refinements = 3;

    p.data.epsilon = eps;
    p.data.f = [eps, sol](double x, double y) {
        const double r2 = x * x + y * y;
        if (r2 >= 1.0) return 2.0 * eps * eps - sol.profile(std::sqrt(r2));
        return 2.0 * eps * eps + 0.5 * (1.0 - r2);
    };
    p.data.neumann = [](double, double) { return 0.0; };
    p.data.obstacle = [](double, double) { return 0.0; };
    p.data.obstacle_gradient = [](double, double) { return Vec2{0.0, 0.0}; };
    p.data.dirichlet = [sol](double x, double y) { return -sol.profile(std::hypot(x, y)); };

    ExactSolution exact;
    exact.value = [sol](double x, double y) { return -sol.profile(std::hypot(x, y)); };
    exact.gradient = [](double x, double y) {
        const double r2 = x * x + y * y;
        if (r2 < 1.0) return Vec2{0.0, 0.0};
        const double factor = -(1.0 - 1.0 / r2);
        return Vec2{factor * x, factor * y};
    };
    p.exact = exact;

    p.cut_by_kink = [](const Mesh& mesh, int e) {
        const auto& t = mesh.element(e);
        double lo = kInf, hi = -kInf;
        for (int v : t) {
            const double r = norm(mesh.vertex(v));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return lo < 1.0 && 1.0 < hi;
    };
    return p;
}

ProblemDefinition make_problem(const std::string& name, double eps) {
    if (name == "example1") return example1(eps);
    if (name == "example2") return example2(eps);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

namespace {

// A field spec is an expression string or a piecewise list; the last case of
// a piecewise list must be the default (no predicate).
ScalarField parse_field(const nlohmann::json& spec) {
    if (spec.is_string()) {
        const Expression e = Expression::parse(spec.get<std::string>());
        return [e](double x, double y) { return e(x, y); };
    }
    if (!spec.is_array() || spec.empty())
        throw std::invalid_argument("field spec must be an expression string or a case list");
    std::vector<std::pair<std::optional<Expression>, Expression>> cases;
    for (const auto& item : spec) {
        std::optional<Expression> where;
        if (item.contains("where")) where = Expression::parse(item.at("where").get<std::string>());
        cases.emplace_back(std::move(where), Expression::parse(item.at("value").get<std::string>()));
    }
    if (cases.back().first.has_value())
        throw std::invalid_argument("piecewise field needs a final default case without 'where'");
    return [cases](double x, double y) {
        for (const auto& [where, value] : cases)
            if (!where || (*where)(x, y) != 0.0) return value(x, y);
        return 0.0;
    };
}

}  // namespace

ProblemDefinition problem_from_json(const nlohmann::json& descriptor, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("problem_from_json: eps must be positive");
    ProblemDefinition p;
    p.name = descriptor.value("name", std::string("custom"));
    p.default_initial_refinements = descriptor.value("initial_refinements", 0);

    const auto& domain = descriptor.at("domain");
    if (domain.contains("mesh")) {
        p.initial_mesh = Mesh::from_json(domain.at("mesh"));
    } else {
        const auto& poly = domain.at("polygon");
        if (poly.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
        const BoundaryTag tag = domain.value("boundary", std::string("N")) == "D"
                                    ? BoundaryTag::Dirichlet
                                    : BoundaryTag::Neumann;
        std::vector<Vec2> vertices;
        Vec2 centroid{0.0, 0.0};
        for (const auto& v : poly) {
            vertices.push_back({v.at(0), v.at(1)});
            centroid += vertices.back();
        }
        const int n = static_cast<int>(vertices.size());
        vertices.push_back(centroid / static_cast<double>(n));
        std::vector<std::array<int, 3>> triangles;
        std::vector<BoundaryEdge> boundary;
        for (int i = 0; i < n; ++i) {
            triangles.push_back({i, (i + 1) % n, n});
            boundary.push_back({i, (i + 1) % n, tag});
        }
        p.initial_mesh = Mesh::build(std::move(vertices), std::move(triangles), std::move(boundary));
    }

    p.data.epsilon = eps;
    p.data.f = descriptor.contains("f") ? parse_field(descriptor.at("f")) : ScalarField{};
    p.data.neumann = descriptor.contains("pi") ? parse_field(descriptor.at("pi")) : ScalarField{};
    if (descriptor.contains("g")) {
        p.data.obstacle = parse_field(descriptor.at("g"));
    } else {
        p.data.obstacle = [](double, double) { return kInf; };
    }
    p.data.dirichlet = descriptor.contains("dirichlet") ? parse_field(descriptor.at("dirichlet"))
                                                        : [](double, double) { return 0.0; };
    return p;
}

ErrorNorms energy_error(const Mesh& mesh, const P1Function& phi, const ExactSolution& exact,
                        double eps, const std::function<bool(const Mesh&, int)>& cut_by_kink) {
    const auto& rule = QuadratureRule::triangle_degree5();
    double acc_energy = 0.0;
    double acc_h1 = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.element(e);
        const Vec2 A = mesh.vertex(t[0]);
        const Vec2 B = mesh.vertex(t[1]);
        const Vec2 C = mesh.vertex(t[2]);
        const Vec2 grad_phi = phi.gradient(e);
        const double phi_at_A = phi.coeff[t[0]];

        std::array<std::array<Vec2, 3>, 4> subs;
        int nsub = 1;
        if (cut_by_kink && cut_by_kink(mesh, e)) {
            const Vec2 mab = (A + B) * 0.5, mbc = (B + C) * 0.5, mca = (C + A) * 0.5;
            subs = {{{A, mab, mca}, {mab, B, mbc}, {mca, mbc, C}, {mab, mbc, mca}}};
            nsub = 4;
        } else {
            subs[0] = {A, B, C};
        }
        for (int sub = 0; sub < nsub; ++sub) {
            const auto& s = subs[sub];
            const double area = 0.5 * signed_area2(s[0], s[1], s[2]);
            for (const auto& q : rule.points) {
                const Vec2 x = q.l0 * s[0] + q.l1 * s[1] + q.l2 * s[2];
                const double phi_val = phi_at_A + dot(grad_phi, x - A);
                const double ev = exact.value(x.x, x.y) - phi_val;
                const Vec2 eg = exact.gradient(x.x, x.y) - grad_phi;
                const double g2 = norm2(eg);
                acc_energy += area * q.w * (eps * eps * g2 + ev * ev);
                acc_h1 += area * q.w * (g2 + ev * ev);
            }
        }
    }
    return {std::sqrt(acc_energy), std::sqrt(acc_h1)};
}

}  // namespace spvi
