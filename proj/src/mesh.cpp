#include "seepage/mesh.hpp"
#include "seepage/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace seep {

namespace {

double signed_area(Vec2 a, Vec2 b, Vec2 c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::pair<int, int> sorted_edge(int a, int b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
}

} // namespace

double Mesh::triangle_area(int t) const {
    const auto& tri = triangles[static_cast<size_t>(t)];
    return signed_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
}

double Mesh::triangle_diameter(int t) const {
    const auto& tri = triangles[static_cast<size_t>(t)];
    const double a = norm(vertex(tri[1]) - vertex(tri[0]));
    const double b = norm(vertex(tri[2]) - vertex(tri[1]));
    const double c = norm(vertex(tri[0]) - vertex(tri[2]));
    return std::max({a, b, c});
}

bool Mesh::vertex_in_fluid(int v) const {
    for (const auto& tri : triangles)
        if (tri[0] == v || tri[1] == v || tri[2] == v) return true;
    return false;
}

double Mesh::total_area() const {
    double a = 0.0;
    for (int t = 0; t < n_triangles(); ++t) a += triangle_area(t);
    return a;
}

void Mesh::validate() const {
    const int nv = n_vertices();
    for (size_t t = 0; t < triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int v = triangles[t][static_cast<size_t>(k)];
            if (v < 0 || v >= nv)
                throw MeshError("triangle " + std::to_string(t) +
                                " references vertex " + std::to_string(v) +
                                " out of range");
        }
        if (triangle_area(static_cast<int>(t)) <= 0.0)
            throw MeshError("triangle " + std::to_string(t) +
                            " has non-positive signed area (orientation)");
    }

    // Edge-to-triangle incidence counts.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : triangles) {
        for (int k = 0; k < 3; ++k)
            edge_count[sorted_edge(tri[static_cast<size_t>(k)],
                                   tri[static_cast<size_t>((k + 1) % 3)])]++;
    }
    for (const auto& [e, c] : edge_count) {
        if (c > 2)
            throw TopologyError("edge (" + std::to_string(e.first) + "," +
                                std::to_string(e.second) + ") shared by " +
                                std::to_string(c) + " triangles (non-manifold)");
    }

    std::set<std::pair<int, int>> tagged;
    for (size_t i = 0; i < boundary_edges.size(); ++i) {
        const auto& be = boundary_edges[i];
        if (be.v0 < 0 || be.v0 >= nv || be.v1 < 0 || be.v1 >= nv)
            throw MeshError("boundary edge " + std::to_string(i) +
                            " references vertex out of range");
        if (be.tag == 0)
            throw MeshError("boundary edge " + std::to_string(i) +
                            " carries tag 0");
        const auto key = sorted_edge(be.v0, be.v1);
        if (!tagged.insert(key).second)
            throw MeshError("boundary edge " + std::to_string(i) + " duplicated");
        auto it = edge_count.find(key);
        const int c = it == edge_count.end() ? 0 : it->second;
        // c == 0 is a sealed trace-only edge; c == 1 a true boundary edge.
        if (c == 2)
            throw TopologyError("boundary edge " + std::to_string(i) +
                                " is interior (shared by two triangles)");
    }

    // Every mesh edge with incidence 1 must be a tagged boundary edge.
    for (const auto& [e, c] : edge_count) {
        if (c == 1 && tagged.count(e) == 0)
            throw MeshError("untagged boundary edge (" + std::to_string(e.first) +
                            "," + std::to_string(e.second) + ")");
    }
}

Mesh generate_channel_mesh(double length, double height, int nx, int ny,
                           TagScheme scheme) {
    if (length <= 0.0 || height <= 0.0)
        throw std::invalid_argument("generate_channel_mesh: dimensions must be positive");
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("generate_channel_mesh: cell counts must be >= 1");

    Mesh m;
    const int nvx = nx + 1, nvy = ny + 1;
    m.vertices.reserve(static_cast<size_t>(nvx) * static_cast<size_t>(nvy));
    for (int j = 0; j < nvy; ++j)
        for (int i = 0; i < nvx; ++i)
            m.vertices.push_back({length * i / nx, height * j / ny});

    auto vid = [nvx](int i, int j) { return j * nvx + i; };

    // Split each cell along the lower-left to upper-right diagonal.
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j);
            const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    }

    for (int i = 0; i < nx; ++i)
        m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), scheme.bottom});
    for (int i = 0; i < nx; ++i)
        m.boundary_edges.push_back({vid(i, ny), vid(i + 1, ny), scheme.top});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid(0, j), vid(0, j + 1), scheme.left});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), scheme.right});

    m.validate();
    return m;
}

Mesh generate_two_reservoir_mesh(const ReservoirGeometry& geom) {
    if (geom.width1 <= 0.0 || geom.width2 <= 0.0 || geom.height <= 0.0)
        throw std::invalid_argument("two_reservoir: dimensions must be positive");
    if (geom.gap <= 0.0)
        throw std::invalid_argument("two_reservoir: reservoirs must be disconnected (gap > 0)");
    if (geom.nx_per_unit < 1 || geom.ny < 1)
        throw std::invalid_argument("two_reservoir: cell counts must be >= 1");

    auto cells = [&](double w) {
        return std::max(1, static_cast<int>(std::lround(w * geom.nx_per_unit)));
    };
    const int nx1 = cells(geom.width1);
    const int nx2 = cells(geom.width2);
    const int nxg = cells(geom.gap);
    const int ny = geom.ny;
    const double x1 = geom.width1;             // right edge of reservoir 1
    const double x2 = geom.width1 + geom.gap;  // left edge of reservoir 2
    const double x3 = x2 + geom.width2;

    Mesh m;
    auto add_rect = [&](double xa, double xb, int nx) {
        const int base = m.n_vertices();
        const int nvx = nx + 1;
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                m.vertices.push_back(
                    {xa + (xb - xa) * i / nx, geom.height * j / ny});
        auto vid = [base, nvx](int i, int j) { return base + j * nvx + i; };
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int a = vid(i, j), b = vid(i + 1, j);
                const int c = vid(i + 1, j + 1), d = vid(i, j + 1);
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            }
        }
        return vid;
    };

    auto vid1 = add_rect(0.0, x1, nx1);
    auto vid2 = add_rect(x2, x3, nx2);

    // Sealed-span vertices along y = 0, strictly between the reservoirs.
    std::vector<int> seal(static_cast<size_t>(nxg) + 1);
    seal.front() = vid1(nx1, 0);
    seal.back() = vid2(0, 0);
    for (int i = 1; i < nxg; ++i) {
        seal[static_cast<size_t>(i)] = m.n_vertices();
        m.vertices.push_back({x1 + geom.gap * i / nxg, 0.0});
    }

    // Sigma_l spans both reservoir bottoms and the sealed gap.
    for (int i = 0; i < nx1; ++i)
        m.boundary_edges.push_back({vid1(i, 0), vid1(i + 1, 0), tags::porous_layer});
    for (int i = 0; i < nxg; ++i)
        m.boundary_edges.push_back(
            {seal[static_cast<size_t>(i)], seal[static_cast<size_t>(i) + 1],
             tags::porous_layer});
    for (int i = 0; i < nx2; ++i)
        m.boundary_edges.push_back({vid2(i, 0), vid2(i + 1, 0), tags::porous_layer});

    // Exterior pressure boundaries: outer side of each reservoir.
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid1(0, j), vid1(0, j + 1), tags::neumann_left});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back(
            {vid2(nx2, j), vid2(nx2, j + 1), tags::neumann_right});

    // Remaining walls are rigid: tops and inner sides.
    for (int i = 0; i < nx1; ++i)
        m.boundary_edges.push_back({vid1(i, ny), vid1(i + 1, ny), tags::rigid_wall});
    for (int i = 0; i < nx2; ++i)
        m.boundary_edges.push_back({vid2(i, ny), vid2(i + 1, ny), tags::rigid_wall});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid1(nx1, j), vid1(nx1, j + 1), tags::rigid_wall});
    for (int j = 0; j < ny; ++j)
        m.boundary_edges.push_back({vid2(0, j), vid2(0, j + 1), tags::rigid_wall});

    m.validate();
    return m;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    out << "SEEPMESH 1\n";
    out << "$Nodes\n" << mesh.n_vertices() << "\n";
    for (int i = 0; i < mesh.n_vertices(); ++i)
        out << i << " " << mesh.vertices[static_cast<size_t>(i)].x << " "
            << mesh.vertices[static_cast<size_t>(i)].y << "\n";
    out << "$Triangles\n" << mesh.n_triangles() << "\n";
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        out << t << " " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
    }
    out << "$BoundaryEdges\n" << mesh.boundary_edges.size() << "\n";
    for (size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
        const auto& be = mesh.boundary_edges[e];
        out << e << " " << be.v0 << " " << be.v1 << " " << be.tag << "\n";
    }
}

namespace {

// Line reader that strips '#' comments and tracks line numbers.
class MeshFileReader {
public:
    explicit MeshFileReader(const std::string& path) : in_(path), path_(path) {
        if (!in_) throw std::runtime_error("cannot open mesh file " + path);
    }

    // Next non-empty line as a token stream.
    std::istringstream next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (auto pos = line.find('#'); pos != std::string::npos)
                line.erase(pos);
            std::istringstream ss(line);
            std::string tok;
            if (ss >> tok) {
                ss.clear();
                ss.seekg(0);
                return ss;
            }
        }
        throw ParseError("unexpected end of file in " + path_, lineno_);
    }

    int lineno() const { return lineno_; }

private:
    std::ifstream in_;
    std::string path_;
    int lineno_ = 0;
};

} // namespace

Mesh read_mesh(const std::string& path) {
    MeshFileReader rd(path);

    auto expect = [&](std::istringstream& ss, const std::string& what) {
        std::string tok;
        if (!(ss >> tok) || tok != what)
            throw ParseError("expected \"" + what + "\"", rd.lineno());
    };

    {
        auto ss = rd.next();
        expect(ss, "SEEPMESH");
        int version = 0;
        if (!(ss >> version) || version != 1)
            throw ParseError("unsupported SEEPMESH version", rd.lineno());
    }

    Mesh m;
    {
        auto ss = rd.next();
        expect(ss, "$Nodes");
        int n = 0;
        auto cnt = rd.next();
        if (!(cnt >> n) || n < 0) throw ParseError("bad node count", rd.lineno());
        m.vertices.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto ln = rd.next();
            int id;
            double x, y;
            if (!(ln >> id >> x >> y))
                throw ParseError("malformed node line", rd.lineno());
            if (id != i)
                throw ParseError("node ids must be 0.." + std::to_string(n - 1) +
                                     " strictly increasing",
                                 rd.lineno());
            m.vertices[static_cast<size_t>(i)] = {x, y};
        }
    }
    {
        auto ss = rd.next();
        expect(ss, "$Triangles");
        int n = 0;
        auto cnt = rd.next();
        if (!(cnt >> n) || n < 0) throw ParseError("bad triangle count", rd.lineno());
        m.triangles.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto ln = rd.next();
            int id, a, b, c;
            if (!(ln >> id >> a >> b >> c))
                throw ParseError("malformed triangle line", rd.lineno());
            if (id != i) throw ParseError("triangle ids must be sequential", rd.lineno());
            m.triangles[static_cast<size_t>(i)] = {a, b, c};
        }
    }
    {
        auto ss = rd.next();
        expect(ss, "$BoundaryEdges");
        int n = 0;
        auto cnt = rd.next();
        if (!(cnt >> n) || n < 0) throw ParseError("bad edge count", rd.lineno());
        m.boundary_edges.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto ln = rd.next();
            int id, a, b, tag;
            if (!(ln >> id >> a >> b >> tag))
                throw ParseError("malformed boundary edge line", rd.lineno());
            if (id != i) throw ParseError("edge ids must be sequential", rd.lineno());
            m.boundary_edges[static_cast<size_t>(i)] = {a, b, tag};
        }
    }

    m.validate();
    return m;
}

double TraceMesh::total_length() const {
    double s = 0.0;
    for (const auto& seg : segments) s += seg.length;
    return s;
}

int TraceMesh::local_index(int mesh_vertex) const {
    auto it = std::lower_bound(lookup_.begin(), lookup_.end(),
                               std::pair{mesh_vertex, -1});
    if (it != lookup_.end() && it->first == mesh_vertex) return it->second;
    return -1;
}

TraceMesh extract_trace(const Mesh& mesh, int tag) {
    std::vector<int> edge_ids;
    for (size_t e = 0; e < mesh.boundary_edges.size(); ++e)
        if (mesh.boundary_edges[e].tag == tag) edge_ids.push_back(static_cast<int>(e));
    if (edge_ids.empty())
        throw NotFoundError("no boundary edges carry tag " + std::to_string(tag));

    // Vertex adjacency among tagged edges; a chain has exactly two degree-1
    // endpoints and degree-2 interior vertices.
    std::map<int, std::vector<int>> adj; // vertex -> incident tagged edges
    for (int e : edge_ids) {
        const auto& be = mesh.boundary_edges[static_cast<size_t>(e)];
        adj[be.v0].push_back(e);
        adj[be.v1].push_back(e);
    }
    std::vector<int> endpoints;
    for (const auto& [v, es] : adj) {
        if (es.size() > 2)
            throw TopologyError("tagged edges meet 3+ times at vertex " +
                                std::to_string(v));
        if (es.size() == 1) endpoints.push_back(v);
    }
    if (endpoints.size() != 2)
        throw TopologyError("tagged edges do not form a single open chain (found " +
                            std::to_string(endpoints.size()) + " endpoints)");

    // Walk the chain starting from the endpoint with smaller x (monotone in
    // x for the built-in geometries).
    int start = endpoints[0];
    if (mesh.vertex(endpoints[1]).x < mesh.vertex(start).x) start = endpoints[1];

    TraceMesh trace;
    trace.vertex_ids.push_back(start);
    int prev_edge = -1;
    int cur = start;
    for (size_t step = 0; step < edge_ids.size(); ++step) {
        int next_edge = -1;
        for (int e : adj[cur])
            if (e != prev_edge) next_edge = e;
        if (next_edge < 0)
            throw TopologyError("tagged edge chain is disconnected");
        const auto& be = mesh.boundary_edges[static_cast<size_t>(next_edge)];
        const int nxt = be.v0 == cur ? be.v1 : be.v0;

        TraceSegment seg;
        seg.v0 = cur;
        seg.v1 = nxt;
        seg.parent_edge = next_edge;
        seg.length = norm(mesh.vertex(nxt) - mesh.vertex(cur));
        trace.segments.push_back(seg);
        trace.vertex_ids.push_back(nxt);
        prev_edge = next_edge;
        cur = nxt;
    }
    if (static_cast<size_t>(trace.n_segments()) != edge_ids.size())
        throw TopologyError("tagged edges are disconnected (chain covers " +
                            std::to_string(trace.n_segments()) + " of " +
                            std::to_string(edge_ids.size()) + " edges)");

    trace.arc_coords.resize(trace.vertex_ids.size(), 0.0);
    for (size_t i = 0; i < trace.segments.size(); ++i)
        trace.arc_coords[i + 1] = trace.arc_coords[i] + trace.segments[i].length;

    // Parent triangles: the unique triangle containing both segment vertices.
    std::map<std::pair<int, int>, int> edge_to_tri;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        for (int k = 0; k < 3; ++k)
            edge_to_tri[sorted_edge(tri[static_cast<size_t>(k)],
                                    tri[static_cast<size_t>((k + 1) % 3)])] = t;
    }
    for (auto& seg : trace.segments) {
        auto it = edge_to_tri.find(sorted_edge(seg.v0, seg.v1));
        if (it != edge_to_tri.end()) {
            seg.parent_tri = it->second;
            seg.has_fluid = true;
        }
    }

    // Normals. Fluid segments: point away from the opposite vertex of the
    // parent triangle. Sealed segments: rotate the chain tangent with the
    // same sense as the fluid segments (fall back to (t_y, -t_x)).
    int votes = 0;
    for (auto& seg : trace.segments) {
        const Vec2 t = mesh.vertex(seg.v1) - mesh.vertex(seg.v0);
        Vec2 n{t.y / seg.length, -t.x / seg.length};
        if (seg.has_fluid) {
            const auto& tri = mesh.triangles[static_cast<size_t>(seg.parent_tri)];
            int opp = tri[0];
            for (int v : tri)
                if (v != seg.v0 && v != seg.v1) opp = v;
            const Vec2 mid = 0.5 * (mesh.vertex(seg.v0) + mesh.vertex(seg.v1));
            const Vec2 to_opp = mesh.vertex(opp) - mid;
            if (dot(n, to_opp) > 0.0) n = -1.0 * n;
            votes += (t.y * n.x - t.x * n.y > 0.0) ? 1 : -1;
        }
        seg.normal = n;
    }
    if (votes < 0) {
        // Majority of fluid segments uses the opposite rotation sense; flip
        // the sealed ones to match.
        for (auto& seg : trace.segments)
            if (!seg.has_fluid) seg.normal = -1.0 * seg.normal;
    }

    trace.lookup_.reserve(trace.vertex_ids.size());
    for (size_t i = 0; i < trace.vertex_ids.size(); ++i)
        trace.lookup_.emplace_back(trace.vertex_ids[i], static_cast<int>(i));
    std::sort(trace.lookup_.begin(), trace.lookup_.end());

    return trace;
}

} // namespace seep
