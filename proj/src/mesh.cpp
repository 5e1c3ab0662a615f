#include "spvi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace spvi {

namespace {

std::string entity(const char* kind, int id) {
    std::ostringstream os;
    os << kind << " " << id;
    return os.str();
}

// Rotate (keeping orientation) so that the refinement edge comes first:
// longest edge, ties broken by the smallest opposite-vertex index.
std::array<int, 3> rotate_to_refinement_edge(const std::array<int, 3>& t,
                                             const std::vector<Vec2>& vx) {
    // edge i is (t[i], t[(i+1)%3]); its opposite vertex is t[(i+2)%3]
    double best_len = -1.0;
    int best_i = 0;
    for (int i = 0; i < 3; ++i) {
        const double len = norm2(vx[t[(i + 1) % 3]] - vx[t[i]]);
        const int opposite = t[(i + 2) % 3];
        if (len > best_len ||
            (len == best_len && opposite < t[(best_i + 2) % 3])) {
            best_len = len;
            best_i = i;
        }
    }
    return {t[best_i], t[(best_i + 1) % 3], t[(best_i + 2) % 3]};
}

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Mesh Mesh::build(std::vector<Vec2> vertices,
                 std::vector<std::array<int, 3>> triangles,
                 std::vector<BoundaryEdge> boundary) {
    const int nv = static_cast<int>(vertices.size());
    for (std::size_t e = 0; e < triangles.size(); ++e) {
        auto& t = triangles[e];
        for (int v : t) {
            if (v < 0 || v >= nv)
                throw MeshError("vertex index out of range in " + entity("triangle", (int)e));
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
            throw MeshError("repeated vertex in " + entity("triangle", (int)e));
        const double a2 = signed_area2(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        if (a2 == 0.0)
            throw MeshError("degenerate " + entity("triangle", (int)e));
        if (a2 < 0.0) std::swap(t[1], t[2]);
        t = rotate_to_refinement_edge(t, vertices);
    }
    for (std::size_t s = 0; s < boundary.size(); ++s) {
        if (boundary[s].a < 0 || boundary[s].a >= nv || boundary[s].b < 0 ||
            boundary[s].b >= nv || boundary[s].a == boundary[s].b)
            throw MeshError("invalid endpoints in " + entity("boundary edge", (int)s));
    }

    Mesh m;
    m.vertices_ = std::move(vertices);
    m.elements_ = std::move(triangles);
    m.boundary_ = std::move(boundary);
    m.generation_.assign(m.elements_.size(), 0);
    m.build_tables(/*check_hanging_nodes=*/true);
    return m;
}

Mesh Mesh::assemble(std::vector<Vec2> vertices,
                    std::vector<std::array<int, 3>> triangles,
                    std::vector<BoundaryEdge> boundary,
                    std::vector<int> generation) {
    Mesh m;
    m.vertices_ = std::move(vertices);
    m.elements_ = std::move(triangles);
    m.boundary_ = std::move(boundary);
    m.generation_ = std::move(generation);
    m.build_tables(/*check_hanging_nodes=*/false);
    return m;
}

void Mesh::build_tables(bool check_hanging_nodes) {
    edges_.clear();
    element_edges_.assign(elements_.size(), {-1, -1, -1});

    std::unordered_map<std::uint64_t, int> edge_ids;
    edge_ids.reserve(elements_.size() * 2);
    for (int e = 0; e < element_count(); ++e) {
        const auto& t = elements_[e];
        for (int i = 0; i < 3; ++i) {
            const int a = t[i], b = t[(i + 1) % 3];
            auto [it, inserted] = edge_ids.try_emplace(edge_key(a, b), edge_count());
            if (inserted) {
                Edge ed;
                ed.a = std::min(a, b);
                ed.b = std::max(a, b);
                ed.left = e;
                edges_.push_back(ed);
            } else {
                Edge& ed = edges_[it->second];
                if (ed.right != -1)
                    throw MeshError("non-conforming mesh: edge (" + std::to_string(a) +
                                    "," + std::to_string(b) +
                                    ") shared by more than two triangles, third is " +
                                    entity("triangle", e));
                ed.right = e;
            }
            element_edges_[e][i] = it->second;
        }
    }

    // Attach boundary tags and verify that the tagged edges are exactly the
    // topological boundary.
    std::vector<int> tag_count(edge_count(), 0);
    for (std::size_t s = 0; s < boundary_.size(); ++s) {
        auto it = edge_ids.find(edge_key(boundary_[s].a, boundary_[s].b));
        if (it == edge_ids.end())
            throw MeshError(entity("boundary edge", (int)s) + " is not an edge of the triangulation");
        Edge& ed = edges_[it->second];
        if (ed.right != -1)
            throw MeshError(entity("boundary edge", (int)s) + " is an interior edge");
        if (++tag_count[it->second] > 1)
            throw MeshError(entity("boundary edge", (int)s) + " tagged twice");
        ed.boundary_id = static_cast<int>(s);
    }
    for (int s = 0; s < edge_count(); ++s) {
        if (edges_[s].right == -1 && edges_[s].boundary_id == -1)
            throw MeshError("untagged boundary edge (" + std::to_string(edges_[s].a) +
                            "," + std::to_string(edges_[s].b) + ")");
    }

    if (check_hanging_nodes) {
        // A vertex in the open interior of another element's edge cannot be
        // caught by edge counting; do a geometric sweep with spatial binning.
        double max_len = 0.0;
        for (int s = 0; s < edge_count(); ++s) max_len = std::max(max_len, edge_length(s));
        if (max_len > 0.0) {
            Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
            for (const auto& v : vertices_) {
                lo.x = std::min(lo.x, v.x);
                lo.y = std::min(lo.y, v.y);
            }
            const double cell = max_len;
            auto bin = [&](const Vec2& p) {
                return std::pair<int, int>{(int)std::floor((p.x - lo.x) / cell),
                                           (int)std::floor((p.y - lo.y) / cell)};
            };
            std::map<std::pair<int, int>, std::vector<int>> grid;
            for (int s = 0; s < edge_count(); ++s) grid[bin(edge_midpoint(s))].push_back(s);
            const double tol = 1e-12 * max_len;
            for (int p = 0; p < vertex_count(); ++p) {
                const auto [bx, by] = bin(vertices_[p]);
                for (int dx = -1; dx <= 1; ++dx)
                    for (int dy = -1; dy <= 1; ++dy) {
                        auto it = grid.find({bx + dx, by + dy});
                        if (it == grid.end()) continue;
                        for (int s : it->second) {
                            const Edge& ed = edges_[s];
                            if (ed.a == p || ed.b == p) continue;
                            const Vec2 u = vertices_[ed.b] - vertices_[ed.a];
                            const Vec2 w = vertices_[p] - vertices_[ed.a];
                            const double len = norm(u);
                            if (std::abs(cross(u, w)) / len > tol) continue;
                            const double t = dot(u, w) / (len * len);
                            if (t > tol / len && t < 1.0 - tol / len)
                                throw MeshError("non-conforming mesh: " + entity("vertex", p) +
                                                " hangs on edge (" + std::to_string(ed.a) + "," +
                                                std::to_string(ed.b) + ")");
                        }
                    }
            }
        }
    }

    // Node classification; Dirichlet wins where both boundary parts meet.
    node_kind_.assign(vertex_count(), NodeKind::Interior);
    for (const auto& be : boundary_) {
        if (be.tag == BoundaryTag::Neumann) {
            for (int v : {be.a, be.b})
                if (node_kind_[v] == NodeKind::Interior) node_kind_[v] = NodeKind::Neumann;
        }
    }
    for (const auto& be : boundary_) {
        if (be.tag == BoundaryTag::Dirichlet) {
            node_kind_[be.a] = NodeKind::Dirichlet;
            node_kind_[be.b] = NodeKind::Dirichlet;
        }
    }
}

double Mesh::element_area(int e) const {
    const auto& t = elements_[e];
    return 0.5 * signed_area2(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

Vec2 Mesh::element_centroid(int e) const {
    const auto& t = elements_[e];
    return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

double Mesh::edge_length(int s) const {
    return dist(vertices_[edges_[s].a], vertices_[edges_[s].b]);
}

Vec2 Mesh::edge_midpoint(int s) const {
    return (vertices_[edges_[s].a] + vertices_[edges_[s].b]) * 0.5;
}

Vec2 Mesh::outward_normal(int s, int e) const {
    const Edge& ed = edges_[s];
    Vec2 n = perp(vertices_[ed.b] - vertices_[ed.a]);
    n = n / norm(n);
    if (dot(n, element_centroid(e) - edge_midpoint(s)) > 0.0) n = n * -1.0;
    return n;
}

double Mesh::min_angle() const {
    double best = std::numeric_limits<double>::max();
    for (int e = 0; e < element_count(); ++e) {
        const auto& t = elements_[e];
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = vertices_[t[(i + 1) % 3]] - vertices_[t[i]];
            const Vec2 v = vertices_[t[(i + 2) % 3]] - vertices_[t[i]];
            best = std::min(best, std::atan2(std::abs(cross(u, v)), dot(u, v)));
        }
    }
    return best;
}

double Mesh::element_diameter(int e) const {
    const auto& t = elements_[e];
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        d = std::max(d, dist(vertices_[t[i]], vertices_[t[(i + 1) % 3]]));
    return d;
}

nlohmann::json Mesh::to_json() const {
    nlohmann::json j;
    auto& vx = j["vertices"] = nlohmann::json::array();
    for (const auto& v : vertices_) vx.push_back({v.x, v.y});
    auto& tris = j["triangles"] = nlohmann::json::array();
    for (const auto& t : elements_) tris.push_back({t[0], t[1], t[2]});
    auto& bd = j["boundary"] = nlohmann::json::array();
    for (const auto& be : boundary_)
        bd.push_back({be.a, be.b, be.tag == BoundaryTag::Dirichlet ? "D" : "N"});
    return j;
}

Mesh Mesh::from_json(const nlohmann::json& j) {
    std::vector<Vec2> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back({v.at(0), v.at(1)});
    std::vector<std::array<int, 3>> triangles;
    for (const auto& t : j.at("triangles"))
        triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    std::vector<BoundaryEdge> boundary;
    for (const auto& b : j.at("boundary")) {
        const std::string tag = b.at(2);
        if (tag != "D" && tag != "N")
            throw MeshError("unknown boundary tag '" + tag + "'");
        boundary.push_back({b.at(0).get<int>(), b.at(1).get<int>(),
                            tag == "D" ? BoundaryTag::Dirichlet : BoundaryTag::Neumann});
    }
    return build(std::move(vertices), std::move(triangles), std::move(boundary));
}

Eigen::VectorXd Prolongation::apply(const Eigen::VectorXd& coarse) const {
    Eigen::VectorXd fine(coarse_vertex_count + static_cast<int>(new_nodes.size()));
    fine.head(coarse_vertex_count) = coarse;
    for (std::size_t i = 0; i < new_nodes.size(); ++i)
        fine[coarse_vertex_count + static_cast<int>(i)] =
            0.5 * (coarse[new_nodes[i].a] + coarse[new_nodes[i].b]);
    return fine;
}

std::vector<char> Prolongation::apply_flags(const std::vector<char>& coarse) const {
    std::vector<char> fine(coarse.begin(), coarse.end());
    fine.resize(coarse_vertex_count + new_nodes.size());
    for (std::size_t i = 0; i < new_nodes.size(); ++i)
        fine[coarse_vertex_count + i] = coarse[new_nodes[i].a] && coarse[new_nodes[i].b];
    return fine;
}

BisectResult bisect(const Mesh& mesh, const std::vector<int>& marked) {
    for (int e : marked)
        if (e < 0 || e >= mesh.element_count())
            throw MeshError("marked element " + std::to_string(e) + " out of range");

    // Mark refinement edges of marked elements, then close: an element any of
    // whose edges is marked must have its refinement edge marked as well.
    std::vector<char> edge_marked(mesh.edge_count(), 0);
    for (int e : marked) edge_marked[mesh.element_edges(e)[0]] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int e = 0; e < mesh.element_count(); ++e) {
            const auto& ee = mesh.element_edges(e);
            if (!edge_marked[ee[0]] && (edge_marked[ee[1]] || edge_marked[ee[2]])) {
                edge_marked[ee[0]] = 1;
                changed = true;
            }
        }
    }

    std::vector<Vec2> vertices = mesh.vertices();
    Prolongation prolong;
    prolong.coarse_vertex_count = mesh.vertex_count();
    std::vector<int> midpoint(mesh.edge_count(), -1);
    for (int s = 0; s < mesh.edge_count(); ++s) {
        if (!edge_marked[s]) continue;
        const auto& ed = mesh.edge(s);
        midpoint[s] = static_cast<int>(vertices.size());
        vertices.push_back(mesh.edge_midpoint(s));
        prolong.new_nodes.push_back({ed.a, ed.b});
    }

    std::vector<std::array<int, 3>> tris;
    std::vector<int> gens;
    tris.reserve(mesh.element_count() * 2);
    // Bisection of (a,b,c) at the midpoint m of its refinement edge (a,b)
    // yields (c,a,m) and (b,c,m); a child is bisected again if its own
    // refinement edge (an edge of the parent) is marked.
    auto emit = [&](std::array<int, 3> t, int gen, int mid_of_refinement_edge) {
        if (mid_of_refinement_edge < 0) {
            tris.push_back(t);
            gens.push_back(gen);
        } else {
            tris.push_back({t[2], t[0], mid_of_refinement_edge});
            gens.push_back(gen + 1);
            tris.push_back({t[1], t[2], mid_of_refinement_edge});
            gens.push_back(gen + 1);
        }
    };
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto& t = mesh.element(e);
        const auto& ee = mesh.element_edges(e);
        const int m1 = midpoint[ee[0]];
        const int m2 = midpoint[ee[1]];
        const int m3 = midpoint[ee[2]];
        const int gen = mesh.generation(e);
        if (m1 < 0) {
            tris.push_back(t);
            gens.push_back(gen);
            continue;
        }
        emit({t[2], t[0], m1}, gen + 1, m3);  // child with refinement edge (c,a)
        emit({t[1], t[2], m1}, gen + 1, m2);  // child with refinement edge (b,c)
    }

    std::vector<BoundaryEdge> boundary;
    boundary.reserve(mesh.boundary().size());
    {
        // boundary edge -> mesh edge id
        std::unordered_map<std::uint64_t, int> ids;
        for (int s = 0; s < mesh.edge_count(); ++s)
            ids.emplace(edge_key(mesh.edge(s).a, mesh.edge(s).b), s);
        for (const auto& be : mesh.boundary()) {
            const int s = ids.at(edge_key(be.a, be.b));
            if (midpoint[s] < 0) {
                boundary.push_back(be);
            } else {
                boundary.push_back({be.a, midpoint[s], be.tag});
                boundary.push_back({midpoint[s], be.b, be.tag});
            }
        }
    }

    BisectResult out{Mesh::assemble(std::move(vertices), std::move(tris),
                                    std::move(boundary), std::move(gens)),
                     std::move(prolong)};
    return out;
}

Mesh uniform_refine(const Mesh& mesh) {
    std::vector<int> all(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) all[e] = e;
    return bisect(mesh, all).mesh;
}

PatchIndex build_patches(const Mesh& mesh) {
    PatchIndex patches;
    const int nv = mesh.vertex_count();
    patches.elements.resize(nv);
    patches.interior_edges.resize(nv);
    patches.neumann_edges.resize(nv);
    patches.nodes.resize(nv);
    patches.diameter.assign(nv, 0.0);
    patches.area.assign(nv, 0.0);

    for (int e = 0; e < mesh.element_count(); ++e) {
        const double area = mesh.element_area(e);
        for (int v : mesh.element(e)) {
            patches.elements[v].push_back(e);
            patches.area[v] += area;
        }
    }
    for (int s = 0; s < mesh.edge_count(); ++s) {
        const auto& ed = mesh.edge(s);
        if (ed.right != -1) {
            patches.interior_edges[ed.a].push_back(s);
            patches.interior_edges[ed.b].push_back(s);
        } else if (mesh.boundary()[ed.boundary_id].tag == BoundaryTag::Neumann) {
            patches.neumann_edges[ed.a].push_back(s);
            patches.neumann_edges[ed.b].push_back(s);
        }
    }
    for (int p = 0; p < nv; ++p) {
        auto& nodes = patches.nodes[p];
        for (int e : patches.elements[p])
            for (int v : mesh.element(e)) nodes.push_back(v);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        double d = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j)
                d = std::max(d, dist(mesh.vertex(nodes[i]), mesh.vertex(nodes[j])));
        patches.diameter[p] = d;
    }
    return patches;
}

}  // namespace spvi
