#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace seep {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

/// Boundary tags used by the built-in generators. Scenario configs may
/// remap them; the integers themselves carry no meaning beyond this map.
namespace tags {
constexpr int neumann_left = 1;
constexpr int neumann_right = 2;
constexpr int porous_layer = 3; // Sigma_l
constexpr int rigid_wall = 4;
constexpr int elastic_wall = 5; // Sigma(t)
} // namespace tags

struct BoundaryEdge {
    int v0 = -1;
    int v1 = -1;
    int tag = 0;
};

struct TagScheme {
    int left = tags::neumann_left;
    int right = tags::neumann_right;
    int bottom = tags::porous_layer;
    int top = tags::elastic_wall;
};

/// 2D triangulation with tagged boundary. Immutable after construction.
///
/// Boundary edges normally belong to exactly one triangle. Edges with no
/// adjacent triangle are allowed and mark sealed trace-only spans (the
/// porous layer between disconnected reservoirs); they never carry fluid.
class Mesh {
public:
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;

    double triangle_area(int t) const;
    double triangle_diameter(int t) const;
    Vec2 vertex(int v) const { return vertices[static_cast<size_t>(v)]; }

    /// True if the vertex is referenced by at least one triangle.
    bool vertex_in_fluid(int v) const;

    double total_area() const;
    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    /// Checks all mesh invariants; throws MeshError/TopologyError naming
    /// the offending entity. Idempotent.
    void validate() const;
};

Mesh generate_channel_mesh(double length, double height, int nx, int ny,
                           TagScheme scheme = {});

struct ReservoirGeometry {
    double width1 = 1.0;  // first reservoir
    double width2 = 1.0;  // second reservoir
    double gap = 1.0;     // sealed span between them, > 0
    double height = 1.0;
    int nx_per_unit = 8;  // horizontal cells per unit length
    int ny = 8;           // vertical cells
};

Mesh generate_two_reservoir_mesh(const ReservoirGeometry& geom);

Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

struct TraceSegment {
    int v0 = -1;          // mesh vertex ids, chain order
    int v1 = -1;
    int parent_edge = -1; // index into Mesh::boundary_edges
    int parent_tri = -1;  // adjacent triangle, -1 on sealed spans
    bool has_fluid = false;
    double length = 0.0;
    Vec2 normal;          // outward normal of the fluid domain
};

/// Ordered 1D chain of boundary edges carrying one tag, with cumulative
/// arc length. Segment i joins chain vertices i and i+1.
class TraceMesh {
public:
    std::vector<int> vertex_ids;    // mesh vertex ids in chain order
    std::vector<double> arc_coords; // cumulative arc length per chain vertex
    std::vector<TraceSegment> segments;

    double total_length() const;
    int n_vertices() const { return static_cast<int>(vertex_ids.size()); }
    int n_segments() const { return static_cast<int>(segments.size()); }

    /// Chain index of a mesh vertex, -1 if the vertex is not on the trace.
    int local_index(int mesh_vertex) const;

private:
    friend TraceMesh extract_trace(const Mesh&, int);
    std::vector<std::pair<int, int>> lookup_; // sorted (mesh vertex, chain index)
};

TraceMesh extract_trace(const Mesh& mesh, int tag);

} // namespace seep
