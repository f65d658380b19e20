#include "seepage/fsi_contact.hpp"
#include "seepage/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace seep {

namespace {
constexpr int qp_per_seg = 3;
}

ChannelGeometry make_channel_geometry(double length, double height, int nx, int ny) {
    ChannelGeometry g;
    g.length = length;
    g.height = height;
    g.nx = nx;
    g.ny = ny;
    g.reference = generate_channel_mesh(length, height, nx, ny);
    g.layer = extract_trace(g.reference, tags::porous_layer);
    g.wall = extract_trace(g.reference, tags::elastic_wall);
    FieldSelection fields;
    fields.porous = true;
    fields.wall = true;
    g.dofmap = build_dof_map(g.reference, &g.layer, &g.wall, fields);
    return g;
}

ContactState ContactState::rest(const ChannelGeometry& geom, const PhysParams& params) {
    ContactState c;
    const size_t nqp = static_cast<size_t>(geom.nx) * qp_per_seg;
    c.gap = geom.height - params.g_min;
    c.p_gamma.assign(nqp, -c.gap);
    c.active.assign(nqp, 0);
    c.lambda.assign(nqp, 0.0);
    c.regime.assign(nqp, CouplingRegime::fluid_layer);
    return c;
}

Mesh deform_channel_mesh(const ChannelGeometry& geom,
                         const std::vector<double>& eta, double g_min) {
    const int nvx = geom.nx + 1;
    Mesh m = geom.reference;
    for (int i = 0; i < nvx; ++i) {
        const double htop = geom.height + eta[static_cast<size_t>(i)];
        // the contact constraints act at quadrature points, so a node can
        // legitimately undershoot the floor by O(g_min); clamp those and
        // reject only clearly broken states
        if (htop < -10.0 * g_min)
            throw GeometryError("channel column " + std::to_string(i) +
                                " degenerated below the g_min floor (height " +
                                std::to_string(htop) + ")");
        const double scale = std::max(htop, g_min) / geom.height;
        for (int j = 0; j <= geom.ny; ++j) {
            auto& v = m.vertices[static_cast<size_t>(j * nvx + i)];
            v.y = geom.reference.vertices[static_cast<size_t>(j * nvx + i)].y * scale;
        }
    }
    return m;
}

void assemble_wall(const ChannelGeometry& geom, const PhysParams& params,
                   double dt, const CoupledState& prev, SparseSystem& sys) {
    if (dt <= 0.0) throw std::invalid_argument("assemble_wall: dt must be positive");
    const auto& wall = geom.wall;
    const int n = wall.n_vertices();

    for (int s = 0; s < wall.n_segments(); ++s) {
        const double h = geom.length / geom.nx; // wall operators on the reference arc
        const std::array<int, 2> chain{s, s + 1};
        for (int a = 0; a < 2; ++a) {
            const int va = wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(a)])];
            const int wd_a = geom.dofmap.dof(Field::wall_disp, va);
            const int wv_a = geom.dofmap.dof(Field::wall_vel, va);
            for (int b = 0; b < 2; ++b) {
                const int vb = wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(b)])];
                const int wd_b = geom.dofmap.dof(Field::wall_disp, vb);
                const int wv_b = geom.dofmap.dof(Field::wall_vel, vb);
                const double mab = h / 6.0 * (a == b ? 2.0 : 1.0);
                const double kab = (a == b ? 1.0 : -1.0) / h;

                // momentum row: rho_s (eta_dot^k - eta_dot^{k-1})/dt
                //             + c1 d_x eta d_x w + c0 eta w = F
                sys.add(wd_a, wd_b, params.c1 * kab + params.c0 * mab);
                sys.add(wd_a, wv_b, params.rho_s / dt * mab);
                sys.add_rhs(wd_a, params.rho_s / dt * mab *
                                      prev.eta_dot[static_cast<size_t>(chain[static_cast<size_t>(b)])]);
            }
            // external pressure load presses the wall down
            sys.add_rhs(wd_a, -params.wall_load * h / 2.0);
        }
    }

    // kinematic relation eta - dt eta_dot = eta_prev, nodal
    for (int i = 0; i < n; ++i) {
        const int v = wall.vertex_ids[static_cast<size_t>(i)];
        const int wd = geom.dofmap.dof(Field::wall_disp, v);
        const int wv = geom.dofmap.dof(Field::wall_vel, v);
        sys.add(wv, wd, 1.0);
        sys.add(wv, wv, -dt);
        sys.add_rhs(wv, prev.eta[static_cast<size_t>(i)]);
    }

    // clamped ends
    for (int i : {0, n - 1}) {
        const int v = wall.vertex_ids[static_cast<size_t>(i)];
        sys.set_dirichlet(geom.dofmap.dof(Field::wall_disp, v), 0.0);
        sys.set_dirichlet(geom.dofmap.dof(Field::wall_vel, v), 0.0);
    }
}

void contact_terms(const ChannelGeometry& geom, const PhysParams& params,
                   const std::vector<char>& active,
                   const std::vector<double>& lambda_old, double gap,
                   SparseSystem& sys) {
    if (params.gamma_c <= 0.0)
        throw std::invalid_argument("contact_terms: gamma_c must be positive");
    const auto& quad = Quadrature::segment();
    const double h = geom.length / geom.nx;

    for (int s = 0; s < geom.wall.n_segments(); ++s) {
        for (int g = 0; g < qp_per_seg; ++g) {
            const int qp = s * qp_per_seg + g;
            if (!active[static_cast<size_t>(qp)]) continue;
            const double W = quad[static_cast<size_t>(g)].w * h;
            const std::array<double, 2> phi{1.0 - quad[static_cast<size_t>(g)].s,
                                            quad[static_cast<size_t>(g)].s};
            const std::array<int, 2> chain{s, s + 1};
            for (int a = 0; a < 2; ++a) {
                const int va = geom.wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(a)])];
                const int wd_a = geom.dofmap.dof(Field::wall_disp, va);
                // lambda = gamma_C (d_n - g) + lambda_old, d_n = -eta
                for (int b = 0; b < 2; ++b) {
                    const int vb =
                        geom.wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(b)])];
                    sys.add(wd_a, geom.dofmap.dof(Field::wall_disp, vb),
                            params.gamma_c * W * phi[static_cast<size_t>(a)] *
                                phi[static_cast<size_t>(b)]);
                }
                sys.add_rhs(wd_a, W * phi[static_cast<size_t>(a)] *
                                      (lambda_old[static_cast<size_t>(qp)] -
                                       params.gamma_c * gap));
            }
        }
    }
}

double sigma_p(double pl_value, double normal_velocity, const PhysParams& params,
               bool /*in_contact*/) {
    if (params.k_n <= 0.0)
        throw std::invalid_argument("sigma_p: k_n must be positive");
    return -pl_value +
           params.sigma_p_velocity_sign * params.interface_penalty() * normal_velocity;
}

double contact_dn(const CoupledState& state, const ChannelGeometry& geom, int qp) {
    const auto& quad = Quadrature::segment();
    const int s = qp / qp_per_seg;
    const double t = quad[static_cast<size_t>(qp % qp_per_seg)].s;
    const double eta = (1.0 - t) * state.eta[static_cast<size_t>(s)] +
                       t * state.eta[static_cast<size_t>(s) + 1];
    return -eta;
}

double min_gap(const CoupledState& state, const ChannelGeometry& geom) {
    double g = geom.height;
    const int nqp = geom.nx * qp_per_seg;
    for (int qp = 0; qp < nqp; ++qp)
        g = std::min(g, geom.height - contact_dn(state, geom, qp));
    return g;
}

namespace {

// Nitsche FSI block on one inactive top quadrature point: symmetric
// consistency terms plus the gamma_fsi/h penalty tying u_f to (0, eta_dot).
void add_nitsche_fsi_qp(const ChannelGeometry& geom, const PhysParams& params,
                        const Mesh& deformed, const TraceSegment& seg, int seg_idx,
                        double s, double weight, SparseSystem& sys) {
    const auto& tri = deformed.triangles[static_cast<size_t>(seg.parent_tri)];
    const Vec2 pa = deformed.vertex(tri[0]), pb = deformed.vertex(tri[1]),
               pc = deformed.vertex(tri[2]);
    const double twoA = (pb.x - pa.x) * (pc.y - pa.y) - (pc.x - pa.x) * (pb.y - pa.y);
    const std::array<Vec2, 3> grad{
        Vec2{(pb.y - pc.y) / twoA, (pc.x - pb.x) / twoA},
        Vec2{(pc.y - pa.y) / twoA, (pa.x - pc.x) / twoA},
        Vec2{(pa.y - pb.y) / twoA, (pb.x - pa.x) / twoA}};
    const Vec2 n = seg.normal;
    const double gamma = params.gamma_fsi / seg.length;

    struct Entry {
        int dof;
        Vec2 val; // contribution to (u - d_dot) resp. (v - w)
        Vec2 sig; // sigma_f(., .) n for this basis function
    };
    std::vector<Entry> basis;
    basis.reserve(11);

    // fluid velocity basis on the parent triangle
    for (int k = 0; k < 3; ++k) {
        const int v = tri[static_cast<size_t>(k)];
        double phi = 0.0;
        if (v == seg.v0) phi = 1.0 - s;
        if (v == seg.v1) phi = s;
        const Vec2 gk = grad[static_cast<size_t>(k)];
        const double gn = dot(gk, n);
        for (int comp = 0; comp < 2; ++comp) {
            Entry e;
            e.dof = geom.dofmap.dof(comp == 0 ? Field::vel_x : Field::vel_y, v);
            e.val = comp == 0 ? Vec2{phi, 0.0} : Vec2{0.0, phi};
            // mu[(g.n) e_c + n_c g]
            e.sig = comp == 0 ? Vec2{params.mu * (gn + n.x * gk.x), params.mu * n.x * gk.y}
                              : Vec2{params.mu * n.y * gk.x, params.mu * (gn + n.y * gk.y)};
            basis.push_back(e);
        }
    }
    // pressure basis: trial sigma is -phi n, test (adjoint, -q) is +phi n.
    // Stored as the trial value; the test side flips the sign below.
    for (int k = 0; k < 3; ++k) {
        const int v = tri[static_cast<size_t>(k)];
        double phi = 0.0;
        if (v == seg.v0) phi = 1.0 - s;
        if (v == seg.v1) phi = s;
        basis.push_back({geom.dofmap.dof(Field::pressure, v),
                         Vec2{0.0, 0.0},
                         Vec2{-phi * n.x, -phi * n.y}});
    }
    // wall velocity enters (u - d_dot) as -(psi) e_y; wall displacement rows
    // receive the same pairing as test functions.
    const std::array<int, 2> chain{seg_idx, seg_idx + 1};
    const std::array<double, 2> psi{1.0 - s, s};
    struct WallEntry {
        int trial_dof; // wall_vel column (d_dot)
        int test_dof;  // wall_disp row (w)
        Vec2 val;
    };
    std::array<WallEntry, 2> wall_basis;
    for (int a = 0; a < 2; ++a) {
        const int v = geom.wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(a)])];
        wall_basis[static_cast<size_t>(a)] = {
            geom.dofmap.dof(Field::wall_vel, v),
            geom.dofmap.dof(Field::wall_disp, v),
            Vec2{0.0, -psi[static_cast<size_t>(a)]}};
    }

    const bool pressure_row = true;
    auto is_pressure = [&](const Entry& e) {
        return e.dof >= geom.dofmap.offset(Field::pressure) &&
               e.dof < geom.dofmap.offset(Field::pressure) +
                           geom.dofmap.count(Field::pressure) &&
               pressure_row;
    };

    // fluid x fluid / pressure blocks
    for (const auto& test : basis) {
        const double test_sig_sign = is_pressure(test) ? -1.0 : 1.0; // adjoint -q
        for (const auto& trial : basis) {
            double v = -dot(test.val, trial.sig)                    // consistency
                       - test_sig_sign * dot(trial.val, test.sig)   // adjoint consistency
                       + gamma * dot(test.val, trial.val);          // penalty
            if (v != 0.0) sys.add(test.dof, trial.dof, weight * v);
        }
        // trial = wall velocity (-psi e_y in u - d_dot)
        for (const auto& wb : wall_basis) {
            double v = -test_sig_sign * dot(wb.val, test.sig) + gamma * dot(test.val, wb.val);
            if (v != 0.0) sys.add(test.dof, wb.trial_dof, weight * v);
        }
    }
    // wall rows (test = -psi e_y in v - w)
    for (const auto& wa : wall_basis) {
        for (const auto& trial : basis) {
            double v = -dot(wa.val, trial.sig) + gamma * dot(wa.val, trial.val);
            if (v != 0.0) sys.add(wa.test_dof, trial.dof, weight * v);
        }
        for (const auto& wb : wall_basis) {
            const double v = gamma * dot(wa.val, wb.val);
            if (v != 0.0) sys.add(wa.test_dof, wb.trial_dof, weight * v);
        }
    }
}

// Monolithic system without the contact constraints; the caller imposes
// eta = -gap on the active wall nodes afterwards and reads the multiplier
// off the momentum residual of this free system.
SparseSystem assemble_coupled(const CoupledState& prev,
                              const std::vector<char>& active,
                              double dt, const PhysParams& params,
                              const ChannelGeometry& geom, const Mesh& deformed,
                              const TraceMesh& wall_deformed) {
    SparseSystem sys(geom.dofmap.total);
    const auto& quad = Quadrature::segment();
    const double pen = params.interface_penalty();
    const double vel_sign = params.sigma_p_velocity_sign;

    const auto x_prev = prev.pack(geom.dofmap);
    assemble_stokes_block(deformed, geom.dofmap, params, dt, &x_prev, sys);
    assemble_surface_darcy(geom.layer, geom.dofmap, params.eps_k_tau(), sys);
    assemble_wall(geom, params, dt, prev, sys);

    // Interface terms: every column quadrature point is coupled through
    // exactly one regime - contact (wall <-> layer) or fluid <-> layer on
    // the bottom plus Nitsche FSI on the top.
    int assembled = 0;
    for (int s = 0; s < geom.nx; ++s) {
        const auto& bseg = geom.layer.segments[static_cast<size_t>(s)];
        const auto& tseg = wall_deformed.segments[static_cast<size_t>(s)];
        const std::array<int, 2> bverts{bseg.v0, bseg.v1};
        const std::array<int, 2> chain{s, s + 1};
        for (int g = 0; g < qp_per_seg; ++g) {
            const int qp = s * qp_per_seg + g;
            const double sq = quad[static_cast<size_t>(g)].s;
            const double Wb = quad[static_cast<size_t>(g)].w * bseg.length;
            const std::array<double, 2> phi{1.0 - sq, sq};
            ++assembled;

            if (active[static_cast<size_t>(qp)]) {
                // contact regime: the wall couples to the layer through
                // sigma_p with the wall velocity; the fluid sliver is
                // passive here.
                for (int a = 0; a < 2; ++a) {
                    const int bva = bverts[static_cast<size_t>(a)];
                    const int wva =
                        geom.wall.vertex_ids[static_cast<size_t>(chain[static_cast<size_t>(a)])];
                    const int pl_a = geom.dofmap.dof(Field::porous_pressure, bva);
                    const int wd_a = geom.dofmap.dof(Field::wall_disp, wva);
                    for (int b = 0; b < 2; ++b) {
                        const int bvb = bverts[static_cast<size_t>(b)];
                        const int wvb = geom.wall.vertex_ids[static_cast<size_t>(
                            chain[static_cast<size_t>(b)])];
                        const int pl_b = geom.dofmap.dof(Field::porous_pressure, bvb);
                        const int wv_b = geom.dofmap.dof(Field::wall_vel, wvb);
                        const double m =
                            Wb * phi[static_cast<size_t>(a)] * phi[static_cast<size_t>(b)];
                        // -(d_dot_n, q_l) with d_dot_n = -eta_dot
                        sys.add(pl_a, wv_b, m);
                        // -(sigma_p, w.n): -P_l column and the seepage
                        // damping on eta_dot
                        sys.add(wd_a, pl_b, -m);
                        sys.add(wd_a, wv_b, -vel_sign * pen * m);
                    }
                }
            } else {
                // fluid <-> layer on the bottom
                const Vec2 n = bseg.normal;
                for (int a = 0; a < 2; ++a) {
                    const int va = bverts[static_cast<size_t>(a)];
                    const int ux_a = geom.dofmap.dof(Field::vel_x, va);
                    const int uy_a = geom.dofmap.dof(Field::vel_y, va);
                    const int pl_a = geom.dofmap.dof(Field::porous_pressure, va);
                    for (int b = 0; b < 2; ++b) {
                        const int vb = bverts[static_cast<size_t>(b)];
                        const int ux_b = geom.dofmap.dof(Field::vel_x, vb);
                        const int uy_b = geom.dofmap.dof(Field::vel_y, vb);
                        const int pl_b = geom.dofmap.dof(Field::porous_pressure, vb);
                        const double m =
                            Wb * phi[static_cast<size_t>(a)] * phi[static_cast<size_t>(b)];
                        sys.add(ux_a, pl_b, n.x * m);
                        sys.add(uy_a, pl_b, n.y * m);
                        const double pm = -vel_sign * pen * m;
                        sys.add(ux_a, ux_b, pm * n.x * n.x);
                        sys.add(ux_a, uy_b, pm * n.x * n.y);
                        sys.add(uy_a, ux_b, pm * n.y * n.x);
                        sys.add(uy_a, uy_b, pm * n.y * n.y);
                        sys.add(pl_a, ux_b, -n.x * m);
                        sys.add(pl_a, uy_b, -n.y * m);
                    }
                }
                // Nitsche FSI on the top
                const double Wt = quad[static_cast<size_t>(g)].w * tseg.length;
                add_nitsche_fsi_qp(geom, params, deformed, tseg, s, sq, Wt, sys);
            }
        }
    }
    if (assembled != geom.nx * qp_per_seg)
        throw std::logic_error("interface regime assembly missed quadrature points");

    // Boundary conditions. The elastic-wall tag couples through Nitsche
    // here, so only genuinely rigid tags get no-slip.
    auto is_neumann = [&](int tag) {
        for (const auto& [t, v] : params.neumann_loads)
            if (t == tag) return true;
        return false;
    };
    for (const auto& be : deformed.boundary_edges) {
        if (be.tag == tags::rigid_wall) {
            for (int v : {be.v0, be.v1}) {
                sys.set_dirichlet(geom.dofmap.dof(Field::vel_x, v), 0.0);
                sys.set_dirichlet(geom.dofmap.dof(Field::vel_y, v), 0.0);
            }
        } else if (params.clamp_tangential_on_neumann && is_neumann(be.tag)) {
            const Vec2 t = deformed.vertex(be.v1) - deformed.vertex(be.v0);
            const Field comp =
                std::abs(t.x) >= std::abs(t.y) ? Field::vel_x : Field::vel_y;
            for (int v : {be.v0, be.v1}) {
                const int d = geom.dofmap.dof(comp, v);
                if (!sys.is_dirichlet(d)) sys.set_dirichlet(d, 0.0);
            }
        }
    }

    // In fully-active columns the fluid sliver top is held fixed; the wall
    // there rests on the layer.
    for (int i = 1; i < geom.nx; ++i) {
        bool locked = true;
        for (int s : {i - 1, i}) {
            if (s < 0 || s >= geom.nx) continue;
            for (int g = 0; g < qp_per_seg; ++g)
                if (!active[static_cast<size_t>(s * qp_per_seg + g)]) locked = false;
        }
        if (locked) {
            const int v = geom.wall.vertex_ids[static_cast<size_t>(i)];
            sys.set_dirichlet(geom.dofmap.dof(Field::vel_x, v), 0.0);
            sys.set_dirichlet(geom.dofmap.dof(Field::vel_y, v), 0.0);
        }
    }

    return sys;
}

} // namespace

FsiStepResult step_coupled(const CoupledState& state, const ContactState& contact,
                           double dt, const PhysParams& params,
                           const ChannelGeometry& geom) {
    if (dt <= 0.0) throw std::invalid_argument("step_coupled: dt must be positive");
    params.check();

    const Mesh deformed = deform_channel_mesh(geom, state.eta, params.g_min);
    const TraceMesh wall_deformed = extract_trace(deformed, tags::elastic_wall);

    const int nqp = geom.nx * qp_per_seg;
    const int nwn = geom.wall.n_vertices();
    if (nwn < 2) throw std::invalid_argument("step_coupled: degenerate wall trace");
    const double gap = contact.gap;

    // The obstacle constraint lives on the wall nodes: eta_i >= -gap. A
    // quadrature point is in contact exactly when both nodes of its segment
    // are (d_n is linear per segment), which keeps the constraint set full
    // rank. Warm start from the incoming active set plus any penetration.
    std::vector<char> node_active(static_cast<size_t>(nwn), 0);
    for (int q = 0; q < nqp; ++q)
        if (contact.active[static_cast<size_t>(q)]) {
            const int s = q / qp_per_seg;
            node_active[static_cast<size_t>(s)] = 1;
            node_active[static_cast<size_t>(s) + 1] = 1;
        }
    for (int i = 0; i < nwn; ++i)
        if (-state.eta[static_cast<size_t>(i)] > gap) node_active[static_cast<size_t>(i)] = 1;
    node_active.front() = 0; // clamped ends stay free
    node_active.back() = 0;

    auto qp_flags = [&](const std::vector<char>& na) {
        std::vector<char> aq(static_cast<size_t>(nqp), 0);
        for (int s = 0; s < geom.nx; ++s)
            if (na[static_cast<size_t>(s)] && na[static_cast<size_t>(s) + 1])
                for (int g = 0; g < qp_per_seg; ++g)
                    aq[static_cast<size_t>(s * qp_per_seg + g)] = 1;
        return aq;
    };

    // Primal-dual active-set iteration: active nodes are held at -gap by
    // Dirichlet rows and the multiplier is the momentum residual of the
    // unconstrained assembly, so the classification
    //   active <-> mu > 0 (on the set), penetration (off it)
    // needs no penalty parameter and settles in a few iterations.
    const int max_iter = 100;
    const double tol_g = 1e-10 * geom.height;
    CoupledState next = state;
    std::vector<double> mu(static_cast<size_t>(nwn), 0.0);
    std::vector<char> active_qp;
    std::ostringstream history;
    int iters = 0;

    for (int it = 0; it < max_iter; ++it) {
        iters = it + 1;
        active_qp = qp_flags(node_active);
        SparseSystem free_sys = assemble_coupled(state, active_qp, dt, params,
                                                 geom, deformed, wall_deformed);
        SparseSystem sys = free_sys;
        for (int i = 1; i < nwn - 1; ++i)
            if (node_active[static_cast<size_t>(i)])
                sys.set_dirichlet(
                    geom.dofmap.dof(Field::wall_disp,
                                    geom.wall.vertex_ids[static_cast<size_t>(i)]),
                    -gap);
        sys.finalize();
        const auto x = solve_linear(sys);
        next = CoupledState::unpack(geom.dofmap, x, state.time + dt);

        // mu_i = (A_free x - b_free) at the momentum row: the nodal contact
        // force needed to keep the wall on the obstacle
        free_sys.finalize();
        const auto r = free_sys.residual(x);
        double mu_scale = 1.0;
        for (int i = 0; i < nwn; ++i) {
            const int wd = geom.dofmap.dof(Field::wall_disp,
                                           geom.wall.vertex_ids[static_cast<size_t>(i)]);
            mu[static_cast<size_t>(i)] =
                node_active[static_cast<size_t>(i)] ? r[static_cast<size_t>(wd)] : 0.0;
            mu_scale = std::max(mu_scale, std::abs(mu[static_cast<size_t>(i)]));
        }
        const double tol_l = 1e-10 * mu_scale;

        std::vector<char> new_active(static_cast<size_t>(nwn), 0);
        for (int i = 1; i < nwn - 1; ++i) {
            if (node_active[static_cast<size_t>(i)])
                new_active[static_cast<size_t>(i)] =
                    mu[static_cast<size_t>(i)] > -tol_l ? 1 : 0;
            else
                new_active[static_cast<size_t>(i)] =
                    -next.eta[static_cast<size_t>(i)] - gap > tol_g ? 1 : 0;
        }
        history << "iter " << it << ": active="
                << std::count(new_active.begin(), new_active.end(), 1) << "; ";

        // anti-cycling: past a generous budget only admit additions, which
        // makes the set monotone and forces termination
        if (it >= 40)
            for (int i = 0; i < nwn; ++i)
                if (node_active[static_cast<size_t>(i)])
                    new_active[static_cast<size_t>(i)] = 1;

        if (new_active == node_active) {
            for (double& m : mu) m = std::max(0.0, m);
            break;
        }
        node_active.swap(new_active);
        if (it + 1 == max_iter)
            throw ConvergenceError(
                "contact active-set iteration did not converge in " +
                std::to_string(max_iter) + " iterations: " + history.str());
    }

    ContactState out;
    out.gap = gap;
    out.p_gamma.resize(static_cast<size_t>(nqp));
    out.active.assign(active_qp.begin(), active_qp.end());
    out.lambda.assign(static_cast<size_t>(nqp), 0.0);
    out.regime.resize(static_cast<size_t>(nqp));
    out.newton_iters = iters;
    out.active_length = 0.0;
    const auto& quad = Quadrature::segment();
    const double h = geom.length / geom.nx;
    // contact pressure: lumped nodal multiplier density interpolated to qps
    std::vector<double> pnode(static_cast<size_t>(nwn), 0.0);
    for (int i = 1; i < nwn - 1; ++i) pnode[static_cast<size_t>(i)] = mu[static_cast<size_t>(i)] / h;
    for (int q = 0; q < nqp; ++q) {
        const int s = q / qp_per_seg;
        const double t = quad[static_cast<size_t>(q % qp_per_seg)].s;
        if (active_qp[static_cast<size_t>(q)])
            out.lambda[static_cast<size_t>(q)] =
                (1.0 - t) * pnode[static_cast<size_t>(s)] +
                t * pnode[static_cast<size_t>(s) + 1];
        out.p_gamma[static_cast<size_t>(q)] =
            contact_dn(next, geom, q) - gap +
            out.lambda[static_cast<size_t>(q)] / params.gamma_c;
        out.regime[static_cast<size_t>(q)] = active_qp[static_cast<size_t>(q)]
                                                 ? CouplingRegime::contact_layer
                                                 : CouplingRegime::fluid_layer;
        if (active_qp[static_cast<size_t>(q)])
            out.active_length += quad[static_cast<size_t>(q % qp_per_seg)].w * h;
    }
    return {std::move(next), std::move(out)};
}

} // namespace seep
