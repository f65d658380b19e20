#include "seepage/stokes_darcy.hpp"
#include "seepage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seep {

CoupledState CoupledState::zero(const DofMap& dofmap) {
    CoupledState s;
    s.u.assign(static_cast<size_t>(dofmap.count(Field::vel_x) +
                                   dofmap.count(Field::vel_y)),
               0.0);
    s.p.assign(static_cast<size_t>(dofmap.count(Field::pressure)), 0.0);
    s.pl.assign(static_cast<size_t>(dofmap.count(Field::porous_pressure)), 0.0);
    s.eta.assign(static_cast<size_t>(dofmap.count(Field::wall_disp)), 0.0);
    s.eta_dot.assign(static_cast<size_t>(dofmap.count(Field::wall_vel)), 0.0);
    return s;
}

CoupledState CoupledState::unpack(const DofMap& dofmap,
                                  const std::vector<double>& x, double time) {
    CoupledState s = zero(dofmap);
    s.time = time;
    auto copy = [&](Field f, std::vector<double>& dst, int dst_off) {
        const int off = dofmap.offset(f), cnt = dofmap.count(f);
        for (int i = 0; i < cnt; ++i)
            dst[static_cast<size_t>(dst_off + i)] = x[static_cast<size_t>(off + i)];
    };
    copy(Field::vel_x, s.u, 0);
    copy(Field::vel_y, s.u, dofmap.count(Field::vel_x));
    copy(Field::pressure, s.p, 0);
    copy(Field::porous_pressure, s.pl, 0);
    copy(Field::wall_disp, s.eta, 0);
    copy(Field::wall_vel, s.eta_dot, 0);
    return s;
}

std::vector<double> CoupledState::pack(const DofMap& dofmap) const {
    std::vector<double> x(static_cast<size_t>(dofmap.total), 0.0);
    auto copy = [&](Field f, const std::vector<double>& src, int src_off) {
        const int off = dofmap.offset(f), cnt = dofmap.count(f);
        for (int i = 0; i < cnt; ++i)
            x[static_cast<size_t>(off + i)] = src[static_cast<size_t>(src_off + i)];
    };
    copy(Field::vel_x, u, 0);
    copy(Field::vel_y, u, dofmap.count(Field::vel_x));
    copy(Field::pressure, p, 0);
    copy(Field::porous_pressure, pl, 0);
    copy(Field::wall_disp, eta, 0);
    copy(Field::wall_vel, eta_dot, 0);
    return x;
}

void apply_fluid_dirichlet(const Mesh& mesh, const DofMap& dofmap,
                           const PhysParams& params, SparseSystem& sys) {
    auto is_neumann = [&](int tag) {
        for (const auto& [t, v] : params.neumann_loads)
            if (t == tag) return true;
        return false;
    };

    // Tangential clamps first so that no-slip corners override them.
    if (params.clamp_tangential_on_neumann) {
        for (const auto& be : mesh.boundary_edges) {
            if (!is_neumann(be.tag)) continue;
            const Vec2 t = mesh.vertex(be.v1) - mesh.vertex(be.v0);
            const Field comp =
                std::abs(t.x) >= std::abs(t.y) ? Field::vel_x : Field::vel_y;
            for (int v : {be.v0, be.v1}) {
                const int d = dofmap.dof(comp, v);
                if (d >= 0) sys.set_dirichlet(d, 0.0);
            }
        }
    }

    for (const auto& be : mesh.boundary_edges) {
        if (be.tag != tags::rigid_wall && be.tag != tags::elastic_wall) continue;
        for (int v : {be.v0, be.v1}) {
            for (Field f : {Field::vel_x, Field::vel_y}) {
                const int d = dofmap.dof(f, v);
                if (d >= 0) sys.set_dirichlet(d, 0.0);
            }
        }
    }
}

void pin_redundant_porous_dofs(const TraceMesh& trace, const DofMap& dofmap,
                               const PhysParams& params, SparseSystem& sys) {
    if (params.eps_k_tau() > 0.0) return;
    // With eps*K_tau = 0, P_l acts as a pure multiplier for u.n = 0. Two
    // kinds of rows degenerate then: sealed-only vertices (empty rows) and
    // vertices whose normal velocity is already fixed by a strong Dirichlet
    // condition (redundant constraint). Pin both.
    std::vector<char> touched(static_cast<size_t>(trace.n_vertices()), 0);
    std::vector<Vec2> normal(static_cast<size_t>(trace.n_vertices()));
    for (int s = 0; s < trace.n_segments(); ++s) {
        const auto& seg = trace.segments[static_cast<size_t>(s)];
        if (!seg.has_fluid) continue;
        for (int i : {s, s + 1}) {
            touched[static_cast<size_t>(i)] = 1;
            normal[static_cast<size_t>(i)] = seg.normal;
        }
    }
    for (int i = 0; i < trace.n_vertices(); ++i) {
        const int v = trace.vertex_ids[static_cast<size_t>(i)];
        const int d = dofmap.dof(Field::porous_pressure, v);
        if (!touched[static_cast<size_t>(i)]) {
            sys.set_dirichlet(d, 0.0);
            continue;
        }
        const Vec2 n = normal[static_cast<size_t>(i)];
        const Field comp = std::abs(n.x) >= std::abs(n.y) ? Field::vel_x : Field::vel_y;
        if (sys.is_dirichlet(dofmap.dof(comp, v))) sys.set_dirichlet(d, 0.0);
    }
}

namespace {

CoupledState solve_coupled(const CoupledState* prev, double dt,
                           const PhysParams& params, const Mesh& mesh,
                           const TraceMesh& trace, const DofMap& dofmap) {
    params.check();
    SparseSystem sys(dofmap.total);

    std::vector<double> x_prev;
    if (prev) x_prev = prev->pack(dofmap);
    assemble_stokes_block(mesh, dofmap, params, dt, prev ? &x_prev : nullptr, sys);
    assemble_surface_darcy(trace, dofmap, params.eps_k_tau(), sys);
    assemble_interface_coupling(trace, dofmap, params, sys);
    apply_fluid_dirichlet(mesh, dofmap, params, sys);
    pin_redundant_porous_dofs(trace, dofmap, params, sys);

    sys.finalize();
    const auto x = solve_linear(sys);
    const double t_new = prev ? prev->time + dt : 0.0;
    return CoupledState::unpack(dofmap, x, t_new);
}

} // namespace

CoupledState step(const CoupledState& state, double dt, const PhysParams& params,
                  const Mesh& mesh, const TraceMesh& trace, const DofMap& dofmap) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    return solve_coupled(&state, dt, params, mesh, trace, dofmap);
}

CoupledState steady_solve(const PhysParams& params, const Mesh& mesh,
                          const TraceMesh& trace, const DofMap& dofmap) {
    return solve_coupled(nullptr, 0.0, params, mesh, trace, dofmap);
}

double compute_interface_flux(const CoupledState& state, const TraceMesh& trace,
                              const DofMap& dofmap, double arc_begin,
                              double arc_end) {
    const double total = trace.total_length();
    const double tol = 1e-12 * (1.0 + total);
    if (arc_begin < -tol || arc_end > total + tol || arc_begin > arc_end)
        throw std::out_of_range("compute_interface_flux: window outside trace extent");

    const int nux = dofmap.count(Field::vel_x);
    auto un_at_chain_vertex = [&](int chain_i, const Vec2& n) {
        const int v = trace.vertex_ids[static_cast<size_t>(chain_i)];
        const int dx = dofmap.dof(Field::vel_x, v);
        const int dy = dofmap.dof(Field::vel_y, v);
        const double ux = dx < 0 ? 0.0 : state.u[static_cast<size_t>(dx - dofmap.offset(Field::vel_x))];
        const double uy = dy < 0 ? 0.0
                                 : state.u[static_cast<size_t>(nux + dy - dofmap.offset(Field::vel_y))];
        return n.x * ux + n.y * uy;
    };

    double flux = 0.0;
    for (int s = 0; s < trace.n_segments(); ++s) {
        const auto& seg = trace.segments[static_cast<size_t>(s)];
        if (!seg.has_fluid) continue;
        const double s0 = trace.arc_coords[static_cast<size_t>(s)];
        const double s1 = trace.arc_coords[static_cast<size_t>(s) + 1];
        const double a = std::max(s0, arc_begin);
        const double b = std::min(s1, arc_end);
        if (b <= a) continue;
        const double un0 = un_at_chain_vertex(s, seg.normal);
        const double un1 = un_at_chain_vertex(s + 1, seg.normal);
        for (const auto& q : Quadrature::segment()) {
            const double arc = a + q.s * (b - a);
            const double lam = (arc - s0) / seg.length;
            flux += q.w * (b - a) * ((1.0 - lam) * un0 + lam * un1);
        }
    }
    return flux;
}

EnergyReport energy_report(const CoupledState& state, const PhysParams& params,
                           const Mesh& mesh, const TraceMesh& trace,
                           const DofMap& dofmap) {
    EnergyReport rep;
    const int nux = dofmap.count(Field::vel_x);

    auto uv = [&](int vertex, int comp) {
        const Field f = comp == 0 ? Field::vel_x : Field::vel_y;
        const int d = dofmap.dof(f, vertex);
        if (d < 0) return 0.0;
        return state.u[static_cast<size_t>(comp * nux + d - dofmap.offset(f))];
    };

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]),
                   c = mesh.vertex(tri[2]);
        const double twoA = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double area = 0.5 * twoA;
        const std::array<Vec2, 3> grad{
            Vec2{(b.y - c.y) / twoA, (c.x - b.x) / twoA},
            Vec2{(c.y - a.y) / twoA, (a.x - c.x) / twoA},
            Vec2{(a.y - b.y) / twoA, (b.x - a.x) / twoA}};

        // constant velocity gradient on the element
        double g[2][2] = {{0, 0}, {0, 0}};
        for (int k = 0; k < 3; ++k) {
            const int v = tri[static_cast<size_t>(k)];
            for (int i = 0; i < 2; ++i) {
                g[i][0] += uv(v, i) * grad[static_cast<size_t>(k)].x;
                g[i][1] += uv(v, i) * grad[static_cast<size_t>(k)].y;
            }
        }
        double dv = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                dv += (g[i][j] + g[j][i]) * g[i][j];
        rep.d_visc += params.mu * area * dv;

        // consistent mass for |u|^2
        for (int i = 0; i < 2; ++i)
            for (int ka = 0; ka < 3; ++ka)
                for (int kb = 0; kb < 3; ++kb)
                    rep.e_kin += 0.5 * params.rho_f * area / 12.0 *
                                 (ka == kb ? 2.0 : 1.0) *
                                 uv(tri[static_cast<size_t>(ka)], i) *
                                 uv(tri[static_cast<size_t>(kb)], i);
    }

    const double pen = params.interface_penalty();
    for (int s = 0; s < trace.n_segments(); ++s) {
        const auto& seg = trace.segments[static_cast<size_t>(s)];
        const int v0 = seg.v0, v1 = seg.v1;
        const double p0 = state.pl[static_cast<size_t>(trace.local_index(v0))];
        const double p1 = state.pl[static_cast<size_t>(trace.local_index(v1))];
        const double dpl = (p1 - p0) / seg.length;
        rep.d_darcy += params.eps_k_tau() * dpl * dpl * seg.length;

        if (!seg.has_fluid) continue;
        const double un0 = seg.normal.x * uv(v0, 0) + seg.normal.y * uv(v0, 1);
        const double un1 = seg.normal.x * uv(v1, 0) + seg.normal.y * uv(v1, 1);
        rep.d_iface += pen * seg.length / 3.0 * (un0 * un0 + un0 * un1 + un1 * un1);
    }
    return rep;
}

} // namespace seep
