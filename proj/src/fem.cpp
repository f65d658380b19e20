#include "seepage/fem.hpp"
#include "seepage/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>

namespace seep {

// --- DofMap ---------------------------------------------------------------

int DofMap::dof(Field f, int mesh_vertex) const {
    const auto fi = static_cast<size_t>(f);
    if (count_[fi] == 0) return -1;
    const std::vector<int>* slots = nullptr;
    switch (f) {
        case Field::vel_x:
        case Field::vel_y:
        case Field::pressure:
            slots = &fluid_slot_;
            break;
        case Field::porous_pressure:
            slots = &trace_slot_;
            break;
        case Field::wall_disp:
        case Field::wall_vel:
            slots = &wall_slot_;
            break;
    }
    const int s = (*slots)[static_cast<size_t>(mesh_vertex)];
    return s < 0 ? -1 : offset_[fi] + s;
}

DofMap build_dof_map(const Mesh& mesh, const TraceMesh* layer,
                     const TraceMesh* wall, FieldSelection fields) {
    if (fields.porous && layer == nullptr)
        throw ConfigError("porous pressure field selected but no layer trace given");
    if (fields.wall && wall == nullptr)
        throw ConfigError("wall fields selected but no wall trace given");

    DofMap dm;
    const auto nv = static_cast<size_t>(mesh.n_vertices());
    dm.fluid_slot_.assign(nv, -1);
    dm.trace_slot_.assign(nv, -1);
    dm.wall_slot_.assign(nv, -1);

    std::vector<char> used(nv, 0);
    for (const auto& tri : mesh.triangles)
        for (int v : tri) used[static_cast<size_t>(v)] = 1;
    for (size_t v = 0; v < nv; ++v) {
        if (used[v]) {
            dm.fluid_slot_[v] = dm.n_fluid_++;
            dm.fluid_vertices_.push_back(static_cast<int>(v));
        }
    }

    if (layer)
        for (size_t i = 0; i < layer->vertex_ids.size(); ++i)
            dm.trace_slot_[static_cast<size_t>(layer->vertex_ids[i])] =
                static_cast<int>(i);
    if (wall)
        for (size_t i = 0; i < wall->vertex_ids.size(); ++i)
            dm.wall_slot_[static_cast<size_t>(wall->vertex_ids[i])] =
                static_cast<int>(i);

    const int n_layer = layer ? layer->n_vertices() : 0;
    const int n_wall = wall ? wall->n_vertices() : 0;

    int off = 0;
    auto place = [&](Field f, int count) {
        dm.offset_[static_cast<size_t>(f)] = off;
        dm.count_[static_cast<size_t>(f)] = count;
        off += count;
    };
    place(Field::vel_x, fields.velocity ? dm.n_fluid_ : 0);
    place(Field::vel_y, fields.velocity ? dm.n_fluid_ : 0);
    place(Field::pressure, fields.pressure ? dm.n_fluid_ : 0);
    place(Field::porous_pressure, fields.porous ? n_layer : 0);
    place(Field::wall_disp, fields.wall ? n_wall : 0);
    place(Field::wall_vel, fields.wall ? n_wall : 0);
    dm.total = off;
    return dm;
}

// --- Quadrature -----------------------------------------------------------

const std::array<Quadrature::TriPoint, 6>& Quadrature::triangle() {
    // Dunavant degree-4 rule; weights scaled to sum to the reference
    // triangle area 1/2.
    constexpr double a1 = 0.108103018168070, b1 = 0.445948490915965;
    constexpr double a2 = 0.816847572980459, b2 = 0.091576213509771;
    constexpr double w1 = 0.223381589678011 * 0.5;
    constexpr double w2 = 0.109951743655322 * 0.5;
    static const std::array<TriPoint, 6> pts = {{
        {b1, b1, w1}, {a1, b1, w1}, {b1, a1, w1},
        {b2, b2, w2}, {a2, b2, w2}, {b2, a2, w2},
    }};
    return pts;
}

const std::array<Quadrature::SegPoint, 3>& Quadrature::segment() {
    const double r = std::sqrt(0.6);
    static const std::array<SegPoint, 3> pts = {{
        {0.5 * (1.0 - r), 5.0 / 18.0},
        {0.5, 8.0 / 18.0},
        {0.5 * (1.0 + r), 5.0 / 18.0},
    }};
    return pts;
}

// --- SparseSystem ---------------------------------------------------------

SparseSystem::SparseSystem(int n)
    : n_(n),
      rhs_(static_cast<size_t>(n), 0.0),
      dirichlet_(static_cast<size_t>(n), 0),
      dirichlet_value_(static_cast<size_t>(n), 0.0) {}

void SparseSystem::add(int row, int col, double value) {
    triplets_.push_back({row, col, value});
}

void SparseSystem::set_dirichlet(int dof, double value) {
    dirichlet_[static_cast<size_t>(dof)] = 1;
    dirichlet_value_[static_cast<size_t>(dof)] = value;
}

bool SparseSystem::is_dirichlet(int dof) const {
    return dirichlet_[static_cast<size_t>(dof)] != 0;
}

void SparseSystem::finalize() {
    std::vector<Triplet> kept;
    kept.reserve(triplets_.size() + static_cast<size_t>(n_));
    for (const auto& t : triplets_)
        if (!dirichlet_[static_cast<size_t>(t.row)]) kept.push_back(t);
    for (int d = 0; d < n_; ++d) {
        if (dirichlet_[static_cast<size_t>(d)]) {
            kept.push_back({d, d, 1.0});
            rhs_[static_cast<size_t>(d)] = dirichlet_value_[static_cast<size_t>(d)];
        }
    }

    std::sort(kept.begin(), kept.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    row_ptr_.assign(static_cast<size_t>(n_) + 1, 0);
    col_.clear();
    val_.clear();
    for (size_t i = 0; i < kept.size();) {
        size_t j = i;
        double sum = 0.0;
        while (j < kept.size() && kept[j].row == kept[i].row &&
               kept[j].col == kept[i].col)
            sum += kept[j++].value;
        col_.push_back(kept[i].col);
        val_.push_back(sum);
        row_ptr_[static_cast<size_t>(kept[i].row) + 1]++;
        i = j;
    }
    for (int r = 0; r < n_; ++r) row_ptr_[static_cast<size_t>(r) + 1] += row_ptr_[static_cast<size_t>(r)];
    triplets_.clear();
    triplets_.shrink_to_fit();
    finalized_ = true;
}

std::vector<double> SparseSystem::matvec(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<size_t>(n_), 0.0);
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            y[static_cast<size_t>(r)] +=
                val_[static_cast<size_t>(k)] * x[static_cast<size_t>(col_[static_cast<size_t>(k)])];
    return y;
}

std::vector<double> SparseSystem::residual(const std::vector<double>& x) const {
    auto y = matvec(x);
    for (int r = 0; r < n_; ++r) y[static_cast<size_t>(r)] -= rhs_[static_cast<size_t>(r)];
    return y;
}

bool SparseSystem::symmetric_pattern() const {
    std::vector<std::pair<int, int>> entries;
    entries.reserve(col_.size());
    for (int r = 0; r < n_; ++r)
        for (int k = row_ptr_[static_cast<size_t>(r)]; k < row_ptr_[static_cast<size_t>(r) + 1]; ++k)
            entries.emplace_back(r, col_[static_cast<size_t>(k)]);
    // entries are sorted by construction (row-major, increasing cols)
    for (const auto& [r, c] : entries)
        if (!std::binary_search(entries.begin(), entries.end(), std::pair{c, r}))
            return false;
    return true;
}

std::vector<double> solve_linear(const SparseSystem& system) {
    if (!system.finalized())
        throw std::logic_error("solve_linear: system not finalized");
    const int n = system.size();
    const auto& rp = system.row_offsets();
    const auto& cols = system.cols();
    const auto& vals = system.values();

    // Structurally empty rows/columns are singular; report them up front
    // with the offending index.
    std::vector<char> col_seen(static_cast<size_t>(n), 0);
    for (int r = 0; r < n; ++r) {
        bool nonzero = false;
        for (int k = rp[static_cast<size_t>(r)]; k < rp[static_cast<size_t>(r) + 1]; ++k) {
            if (vals[static_cast<size_t>(k)] != 0.0) {
                nonzero = true;
                col_seen[static_cast<size_t>(cols[static_cast<size_t>(k)])] = 1;
            }
        }
        if (!nonzero)
            throw SingularSystemError("singular system: row " + std::to_string(r) +
                                          " has no nonzero entries",
                                      r);
    }
    for (int c = 0; c < n; ++c)
        if (!col_seen[static_cast<size_t>(c)])
            throw SingularSystemError("singular system: column " + std::to_string(c) +
                                          " has no nonzero entries",
                                      c);

    Eigen::SparseMatrix<double> A(n, n);
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(vals.size());
        for (int r = 0; r < n; ++r)
            for (int k = rp[static_cast<size_t>(r)]; k < rp[static_cast<size_t>(r) + 1]; ++k)
                trip.emplace_back(r, cols[static_cast<size_t>(k)], vals[static_cast<size_t>(k)]);
        A.setFromTriplets(trip.begin(), trip.end());
    }
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SingularSystemError("sparse LU factorization failed: " + lu.lastErrorMessage(),
                                  -1);

    Eigen::Map<const Eigen::VectorXd> b(system.rhs().data(), n);
    Eigen::VectorXd x = lu.solve(b);

    const double res = (A * x - b).norm();
    const double tol = 1e-10 * (1.0 + b.norm());
    if (!(res <= tol) || !x.allFinite())
        throw SingularSystemError("singular-to-tolerance system: residual " +
                                      std::to_string(res) + " exceeds " +
                                      std::to_string(tol),
                                  -1);
    return {x.data(), x.data() + n};
}

// --- Assembly -------------------------------------------------------------

namespace {

struct P1Triangle {
    double area;
    std::array<Vec2, 3> grad; // constant shape gradients
};

P1Triangle p1_geometry(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[static_cast<size_t>(t)];
    const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    const double twoA = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    P1Triangle g;
    g.area = 0.5 * twoA;
    g.grad[0] = {(b.y - c.y) / twoA, (c.x - b.x) / twoA};
    g.grad[1] = {(c.y - a.y) / twoA, (a.x - c.x) / twoA};
    g.grad[2] = {(a.y - b.y) / twoA, (b.x - a.x) / twoA};
    return g;
}

} // namespace

void assemble_stokes_block(const Mesh& mesh, const DofMap& dofmap,
                           const PhysParams& params, double dt,
                           const std::vector<double>* u_prev,
                           SparseSystem& sys) {
    const bool transient = dt > 0.0;
    const double mass_coef = transient ? params.rho_f / dt : 0.0;

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto g = p1_geometry(mesh, t);
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        const double hK = mesh.triangle_diameter(t);
        const double stab = params.delta_stab * hK * hK / params.mu;

        std::array<std::array<int, 3>, 3> dof{}; // [field u_x,u_y,p][local vertex]
        for (int a = 0; a < 3; ++a) {
            const int v = tri[static_cast<size_t>(a)];
            dof[0][static_cast<size_t>(a)] = dofmap.dof(Field::vel_x, v);
            dof[1][static_cast<size_t>(a)] = dofmap.dof(Field::vel_y, v);
            dof[2][static_cast<size_t>(a)] = dofmap.dof(Field::pressure, v);
        }

        for (int a = 0; a < 3; ++a) {
            const Vec2 ga = g.grad[static_cast<size_t>(a)];
            for (int b = 0; b < 3; ++b) {
                const Vec2 gb = g.grad[static_cast<size_t>(b)];
                const double gg = dot(ga, gb) * g.area;
                const double mab = g.area / 12.0 * (a == b ? 2.0 : 1.0);

                // viscous + mass, 2x2 component block
                const std::array<double, 2> gav{ga.x, ga.y}, gbv{gb.x, gb.y};
                for (int al = 0; al < 2; ++al) {
                    for (int be = 0; be < 2; ++be) {
                        double k = params.mu * g.area *
                                   gbv[static_cast<size_t>(al)] * gav[static_cast<size_t>(be)];
                        if (al == be) k += params.mu * gg;
                        if (al == be && transient) k += mass_coef * mab;
                        sys.add(dof[static_cast<size_t>(al)][static_cast<size_t>(a)],
                                dof[static_cast<size_t>(be)][static_cast<size_t>(b)], k);
                    }
                }

                // -(p, div v) and +(q, div u)
                for (int al = 0; al < 2; ++al) {
                    const double bv = g.area / 3.0 * gav[static_cast<size_t>(al)];
                    sys.add(dof[static_cast<size_t>(al)][static_cast<size_t>(a)],
                            dof[2][static_cast<size_t>(b)], -bv);
                    sys.add(dof[2][static_cast<size_t>(b)],
                            dof[static_cast<size_t>(al)][static_cast<size_t>(a)], bv);
                }

                // pressure stabilization s(p, q)
                sys.add(dof[2][static_cast<size_t>(a)], dof[2][static_cast<size_t>(b)],
                        stab * gg);

                if (transient && u_prev) {
                    for (int al = 0; al < 2; ++al) {
                        const int dprev =
                            dof[static_cast<size_t>(al)][static_cast<size_t>(b)];
                        sys.add_rhs(dof[static_cast<size_t>(al)][static_cast<size_t>(a)],
                                    mass_coef * mab * (*u_prev)[static_cast<size_t>(dprev)]);
                    }
                }
            }
        }
    }

    if (params.neumann_loads.empty()) return;

    // Outward normals for loaded edges come from the adjacent triangle.
    std::map<std::pair<int, int>, int> edge_to_tri;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        for (int k = 0; k < 3; ++k) {
            int u = tri[static_cast<size_t>(k)], v = tri[static_cast<size_t>((k + 1) % 3)];
            if (u > v) std::swap(u, v);
            edge_to_tri[{u, v}] = t;
        }
    }

    for (const auto& be : mesh.boundary_edges) {
        double pbar = 0.0;
        bool loaded = false;
        for (const auto& [tag, value] : params.neumann_loads) {
            if (be.tag == tag) {
                pbar = value;
                loaded = true;
            }
        }
        if (!loaded) continue;

        int u = be.v0, v = be.v1;
        if (u > v) std::swap(u, v);
        auto it = edge_to_tri.find({u, v});
        if (it == edge_to_tri.end()) continue; // sealed edge carries no fluid load

        const Vec2 p0 = mesh.vertex(be.v0), p1 = mesh.vertex(be.v1);
        const Vec2 tv = p1 - p0;
        const double len = norm(tv);
        Vec2 n{tv.y / len, -tv.x / len};
        const auto& tri = mesh.triangles[static_cast<size_t>(it->second)];
        int opp = tri[0];
        for (int w : tri)
            if (w != be.v0 && w != be.v1) opp = w;
        if (dot(n, mesh.vertex(opp) - p0) > 0.0) n = -1.0 * n;

        // -(Pbar n, v) over the edge: each vertex picks up len/2.
        for (int vert : {be.v0, be.v1}) {
            sys.add_rhs(dofmap.dof(Field::vel_x, vert), -pbar * n.x * len / 2.0);
            sys.add_rhs(dofmap.dof(Field::vel_y, vert), -pbar * n.y * len / 2.0);
        }
    }
}

void assemble_surface_darcy(const TraceMesh& trace, const DofMap& dofmap,
                            double eps_k_tau, SparseSystem& sys) {
    if (eps_k_tau < 0.0)
        throw std::invalid_argument("assemble_surface_darcy: eps_k_tau must be >= 0");
    for (const auto& seg : trace.segments) {
        const double k = eps_k_tau / seg.length;
        const int d0 = dofmap.dof(Field::porous_pressure, seg.v0);
        const int d1 = dofmap.dof(Field::porous_pressure, seg.v1);
        sys.add(d0, d0, k);
        sys.add(d0, d1, -k);
        sys.add(d1, d0, -k);
        sys.add(d1, d1, k);
    }
}

void assemble_interface_coupling(const TraceMesh& trace, const DofMap& dofmap,
                                 const PhysParams& params, SparseSystem& sys) {
    if (params.k_n <= 0.0)
        throw std::invalid_argument("assemble_interface_coupling: k_n must be positive");
    const double pen = params.interface_penalty();

    for (const auto& seg : trace.segments) {
        if (!seg.has_fluid) continue;
        const Vec2 n = seg.normal;
        const std::array<int, 2> verts{seg.v0, seg.v1};

        // segment P1 mass, 3-pt Gauss (exact here)
        std::array<std::array<double, 2>, 2> m{};
        for (const auto& q : Quadrature::segment()) {
            const std::array<double, 2> phi{1.0 - q.s, q.s};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    m[static_cast<size_t>(a)][static_cast<size_t>(b)] +=
                        q.w * seg.length * phi[static_cast<size_t>(a)] *
                        phi[static_cast<size_t>(b)];
        }

        for (int a = 0; a < 2; ++a) {
            const int va = verts[static_cast<size_t>(a)];
            const int ux_a = dofmap.dof(Field::vel_x, va);
            const int uy_a = dofmap.dof(Field::vel_y, va);
            const int pl_a = dofmap.dof(Field::porous_pressure, va);
            for (int b = 0; b < 2; ++b) {
                const int vb = verts[static_cast<size_t>(b)];
                const int ux_b = dofmap.dof(Field::vel_x, vb);
                const int uy_b = dofmap.dof(Field::vel_y, vb);
                const int pl_b = dofmap.dof(Field::porous_pressure, vb);
                const double mab = m[static_cast<size_t>(a)][static_cast<size_t>(b)];

                // +(P_l, v.n)
                sys.add(ux_a, pl_b, n.x * mab);
                sys.add(uy_a, pl_b, n.y * mab);
                // eps/(4 k_n) (u.n, v.n)
                sys.add(ux_a, ux_b, pen * n.x * n.x * mab);
                sys.add(ux_a, uy_b, pen * n.x * n.y * mab);
                sys.add(uy_a, ux_b, pen * n.y * n.x * mab);
                sys.add(uy_a, uy_b, pen * n.y * n.y * mab);
                // -(u.n, q_l)
                sys.add(pl_a, ux_b, -n.x * mab);
                sys.add(pl_a, uy_b, -n.y * mab);
            }
        }
    }
}

} // namespace seep
