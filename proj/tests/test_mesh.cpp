#include "seepage/errors.hpp"
#include "seepage/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>

using namespace seep;

namespace {

std::string temp_path(const char* name) {
    return std::string("/tmp/seepage_test_") + name;
}

// V - E + F per connected component, counting unique undirected edges
void check_euler(const Mesh& mesh) {
    // union-find over vertices via triangles
    std::vector<int> parent(static_cast<size_t>(mesh.n_vertices()));
    for (int i = 0; i < mesh.n_vertices(); ++i) parent[static_cast<size_t>(i)] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    std::set<std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[static_cast<size_t>(k)], b = t[static_cast<size_t>((k + 1) % 3)];
            parent[static_cast<size_t>(find(a))] = find(b);
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    std::map<int, std::array<int, 3>> vef; // root -> (V, E, F)
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (mesh.vertex_in_fluid(v)) vef[find(v)][0]++;
    for (const auto& e : edges) vef[find(e.first)][1]++;
    for (const auto& t : mesh.triangles) vef[find(t[0])][2]++;
    for (const auto& [root, counts] : vef)
        CHECK(counts[0] - counts[1] + counts[2] == 1);
}

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("minimal 1x1 channel grid") {
    const Mesh m = generate_channel_mesh(1.0, 1.0, 1, 1);
    CHECK(m.n_vertices() == 4);
    CHECK(m.n_triangles() == 2);
    CHECK(m.boundary_edges.size() == 4);
    m.validate();
}

TEST_CASE("channel vertex count and area identity") {
    const Mesh m = generate_channel_mesh(3.5, 1.25, 7, 3);
    CHECK(m.n_vertices() == 8 * 4);
    CHECK(m.n_triangles() == 2 * 7 * 3);
    CHECK(m.total_area() == doctest::Approx(3.5 * 1.25).epsilon(1e-12));
    m.validate();
    check_euler(m);
}

TEST_CASE("channel bottom tag count") {
    const Mesh m = generate_channel_mesh(4.0, 1.0, 8, 2);
    int bottom = 0;
    for (const auto& e : m.boundary_edges)
        if (e.tag == tags::porous_layer) ++bottom;
    CHECK(bottom == 8);
}

TEST_CASE("channel rejects bad arguments") {
    CHECK_THROWS_AS(generate_channel_mesh(0.0, 1.0, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(generate_channel_mesh(1.0, 1.0, 0, 4), std::invalid_argument);
}

TEST_CASE("two-reservoir construction contract") {
    ReservoirGeometry g; // two unit squares, gap 1
    const Mesh m = generate_two_reservoir_mesh(g);
    m.validate();
    check_euler(m); // two components, Euler per component

    // one connected trace over the full bottom span
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    CHECK(trace.total_length() == doctest::Approx(3.0).epsilon(1e-12));
    int sealed = 0;
    for (const auto& s : trace.segments)
        if (!s.has_fluid) ++sealed;
    CHECK(sealed == g.nx_per_unit); // gap of width 1 at nx_per_unit cells/unit
}

TEST_CASE("two-reservoir degenerate gap") {
    ReservoirGeometry g;
    g.gap = 0.0;
    CHECK_THROWS_AS(generate_two_reservoir_mesh(g), std::invalid_argument);
}

TEST_CASE("two-reservoir triangle count at nx_per_unit=16") {
    ReservoirGeometry g;
    g.nx_per_unit = 16;
    g.ny = 16;
    const Mesh m = generate_two_reservoir_mesh(g);
    CHECK(m.n_triangles() == 2 * (16 * 16 + 16 * 16));
    CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("mesh file round-trip") {
    const Mesh m = generate_two_reservoir_mesh(ReservoirGeometry{});
    const std::string path = temp_path("roundtrip.mesh");
    write_mesh(m, path);
    const Mesh r = read_mesh(path);
    REQUIRE(r.n_vertices() == m.n_vertices());
    REQUIRE(r.n_triangles() == m.n_triangles());
    REQUIRE(r.boundary_edges.size() == m.boundary_edges.size());
    for (int v = 0; v < m.n_vertices(); ++v) {
        CHECK(r.vertex(v).x == m.vertex(v).x);
        CHECK(r.vertex(v).y == m.vertex(v).y);
    }
    for (size_t t = 0; t < m.triangles.size(); ++t)
        CHECK(r.triangles[t] == m.triangles[t]);
    for (size_t e = 0; e < m.boundary_edges.size(); ++e) {
        CHECK(r.boundary_edges[e].v0 == m.boundary_edges[e].v0);
        CHECK(r.boundary_edges[e].v1 == m.boundary_edges[e].v1);
        CHECK(r.boundary_edges[e].tag == m.boundary_edges[e].tag);
    }
    std::remove(path.c_str());
}

TEST_CASE("reader rejects a negatively oriented triangle") {
    const std::string path = temp_path("negarea.mesh");
    {
        std::ofstream out(path);
        out << "SEEPMESH 1\n$Nodes\n3\n0 0 0\n1 1 0\n2 0 1\n";
        out << "$Triangles\n1\n0 0 2 1\n"; // clockwise
        out << "$BoundaryEdges\n3\n0 0 2 4\n1 2 1 4\n2 1 0 3\n";
    }
    CHECK_THROWS_WITH_AS(read_mesh(path), doctest::Contains("triangle 0"), MeshError);
    std::remove(path.c_str());
}

TEST_CASE("reader rejects a non-manifold edge") {
    const std::string path = temp_path("nonmanifold.mesh");
    {
        std::ofstream out(path);
        out << "SEEPMESH 1\n$Nodes\n5\n0 0 0\n1 1 0\n2 0 1\n3 1 1\n4 -1 1\n";
        out << "$Triangles\n3\n0 0 1 2\n1 1 3 2\n2 0 2 4\n"; // edge (0,2)... \n";
        out << "$BoundaryEdges\n0\n";
    }
    // edge (0,2) belongs to triangles 0 and 2 -> fine; make 3-triangle edge:
    {
        std::ofstream out(path);
        out << "SEEPMESH 1\n$Nodes\n5\n0 0 0\n1 1 0\n2 0 1\n3 1 1\n4 -1 0\n";
        out << "$Triangles\n3\n0 0 1 2\n1 1 3 2\n2 4 0 2\n"; // (0,2) in 0 and 2
        out << "$BoundaryEdges\n1\n0 0 2 3\n";               // and also boundary
    }
    CHECK_THROWS_AS(read_mesh(path), MeshError);
    std::remove(path.c_str());
}

TEST_CASE("reader reports parse errors with line numbers") {
    const std::string path = temp_path("parse.mesh");
    {
        std::ofstream out(path);
        out << "SEEPMESH 1\n$Nodes\n1\n0 zero 0\n";
    }
    try {
        read_mesh(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
    }
    std::remove(path.c_str());
}

TEST_CASE("trace extraction on the channel bottom") {
    const Mesh m = generate_channel_mesh(4.0, 1.0, 8, 2);
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    CHECK(trace.n_segments() == 8);
    CHECK(trace.total_length() == doctest::Approx(4.0).epsilon(1e-12));
    // monotone arc coordinates
    for (int i = 1; i < trace.n_vertices(); ++i)
        CHECK(trace.arc_coords[static_cast<size_t>(i)] >
              trace.arc_coords[static_cast<size_t>(i - 1)]);
    // flat bottom: all normals (0,-1)
    for (const auto& s : trace.segments) {
        CHECK(s.normal.x == doctest::Approx(0.0));
        CHECK(s.normal.y == doctest::Approx(-1.0));
        CHECK(s.has_fluid);
        CHECK(s.parent_tri >= 0);
    }
}

TEST_CASE("trace maps back to the tagged edge set") {
    const Mesh m = generate_two_reservoir_mesh(ReservoirGeometry{});
    const TraceMesh trace = extract_trace(m, tags::porous_layer);
    std::set<int> from_trace, tagged;
    for (const auto& s : trace.segments) from_trace.insert(s.parent_edge);
    for (size_t e = 0; e < m.boundary_edges.size(); ++e)
        if (m.boundary_edges[e].tag == tags::porous_layer)
            tagged.insert(static_cast<int>(e));
    CHECK(from_trace == tagged);
}

TEST_CASE("trace with an absent tag") {
    const Mesh m = generate_channel_mesh(1.0, 1.0, 2, 2);
    CHECK_THROWS_AS(extract_trace(m, 77), NotFoundError);
}

TEST_CASE("validation is idempotent") {
    const Mesh m = generate_channel_mesh(2.0, 1.0, 4, 2);
    m.validate();
    m.validate();
}

} // TEST_SUITE
