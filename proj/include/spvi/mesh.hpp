#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "spvi/geometry.hpp"

namespace spvi {

enum class BoundaryTag { Dirichlet, Neumann };

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryTag tag = BoundaryTag::Neumann;
};

enum class NodeKind { Interior, Dirichlet, Neumann };

/// Raised on invalid mesh input; the message names the offending entity.
class MeshError : public std::runtime_error {
public:
    explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

class Mesh;
struct BisectResult;
BisectResult bisect(const Mesh& mesh, const std::vector<int>& marked);

/// Conforming 2D triangulation with tagged boundary and newest-vertex
/// bisection support. Immutable after construction: refinement returns a new
/// mesh. The refinement edge of element e is the edge between its first two
/// stored vertices.
class Mesh {
public:
    struct Edge {
        int a = -1, b = -1;     // endpoints, a < b
        int left = -1;          // adjacent element of lowest id
        int right = -1;         // second adjacent element, -1 on the boundary
        int boundary_id = -1;   // index into boundary(), -1 for interior edges
    };

    /// Validates and builds a mesh from raw input. Triangles are oriented
    /// positively and rotated so that the refinement edge (longest edge, ties
    /// broken by the smallest opposite-vertex index) comes first.
    static Mesh build(std::vector<Vec2> vertices,
                      std::vector<std::array<int, 3>> triangles,
                      std::vector<BoundaryEdge> boundary);

    Mesh() = default;  // empty mesh, useful as a placeholder

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int element_count() const { return static_cast<int>(elements_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const Vec2& vertex(int v) const { return vertices_[v]; }
    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::array<int, 3>& element(int e) const { return elements_[e]; }
    const std::vector<std::array<int, 3>>& elements() const { return elements_; }
    int generation(int e) const { return generation_[e]; }
    const std::vector<BoundaryEdge>& boundary() const { return boundary_; }

    const Edge& edge(int s) const { return edges_[s]; }
    /// Edge ids of element e; entry i is the edge between local vertices i and
    /// (i+1)%3, so entry 0 is the refinement edge.
    const std::array<int, 3>& element_edges(int e) const { return element_edges_[e]; }

    NodeKind node_kind(int p) const { return node_kind_[p]; }

    double element_area(int e) const;
    Vec2 element_centroid(int e) const;
    double edge_length(int s) const;
    Vec2 edge_midpoint(int s) const;
    /// Unit normal of edge s pointing out of element e (e must be adjacent).
    Vec2 outward_normal(int s, int e) const;

    /// Smallest interior angle over all elements, in radians.
    double min_angle() const;
    /// Longest edge of element e.
    double element_diameter(int e) const;

    nlohmann::json to_json() const;
    static Mesh from_json(const nlohmann::json& j);

private:
    /// Trusted constructor used by refinement: keeps vertex order (which
    /// encodes the NVB refinement edges) and only re-derives edge tables.
    static Mesh assemble(std::vector<Vec2> vertices,
                         std::vector<std::array<int, 3>> triangles,
                         std::vector<BoundaryEdge> boundary,
                         std::vector<int> generation);
    void build_tables(bool check_hanging_nodes);

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> elements_;
    std::vector<BoundaryEdge> boundary_;
    std::vector<int> generation_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> element_edges_;
    std::vector<NodeKind> node_kind_;

    friend BisectResult bisect(const Mesh& mesh, const std::vector<int>& marked);
};

/// Carries nodal data from a mesh to its refinement. Old vertices keep their
/// indices; every new vertex is the midpoint of a parent edge.
struct Prolongation {
    struct Parent {
        int a = -1, b = -1;
    };
    int coarse_vertex_count = 0;
    std::vector<Parent> new_nodes;

    /// New nodal vector; new-node values are parent-endpoint averages.
    Eigen::VectorXd apply(const Eigen::VectorXd& coarse) const;
    /// Carry boolean node flags; a new node inherits the AND of its parents.
    std::vector<char> apply_flags(const std::vector<char>& coarse) const;
};

/// Result of `bisect`: the refined mesh and the nodal carry-over map.
/// Newest vertex bisection: every marked element is bisected at least once;
/// conformity is restored by iterated bisection of neighbors.
struct BisectResult {
    Mesh mesh;
    Prolongation prolongation;
};

/// Bisect every element (with closure).
Mesh uniform_refine(const Mesh& mesh);

/// Per-node patch data: elements of omega_p, interior skeleton edges touching
/// p, Neumann boundary edges touching p, and the patch diameter h_p.
struct PatchIndex {
    std::vector<std::vector<int>> elements;        // omega_p
    std::vector<std::vector<int>> interior_edges;  // gamma_p^I
    std::vector<std::vector<int>> neumann_edges;   // gamma_p^N
    std::vector<std::vector<int>> nodes;           // vertices of omega_p (sorted, incl. p)
    std::vector<double> diameter;                  // h_p
    std::vector<double> area;                      // |omega_p|
};

PatchIndex build_patches(const Mesh& mesh);

}  // namespace spvi
